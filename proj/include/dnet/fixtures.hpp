#pragma once

#include <array>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "decode.hpp"
#include "elaborate.hpp"
#include "model.hpp"
#include "syntax.hpp"

namespace dnet {

struct unknown_fixture_error : std::runtime_error {
    explicit unknown_fixture_error(const std::string& n)
        : std::runtime_error("unknown fixture: " + n) {}
};

struct io_error : std::runtime_error {
    explicit io_error(const std::string& path)
        : std::runtime_error("cannot read " + path) {}
};

inline const std::array<std::string, 8>& fixture_names() {
    static const std::array<std::string, 8> names = {
        "omap44xx-mem", "omap44xx-irq", "desktop-mem", "desktop-irq",
        "server-mem",   "server-irq",   "cluster",     "scc",
    };
    return names;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw io_error(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline std::pair<net, symbol_table> load_model(const std::string& path) {
    return elaborate(parse(read_file(path)));
}

inline std::pair<net, symbol_table> load_fixture(const std::string& fixture,
                                                 const std::string& dir) {
    const auto& names = fixture_names();
    if (std::find(names.begin(), names.end(), fixture) == names.end())
        throw unknown_fixture_error(fixture);
    return load_model(dir + "/" + fixture + ".dn");
}

// One resolution test vector: either a set of expected names or a loop flag.
struct golden_vector {
    std::string model; // fixture file name
    std::string start_node;
    addr start_addr;
    bool expect_loop = false;
    std::vector<std::pair<std::string, addr>> expect; // sorted on load
    std::string provenance;                           // "PAPER" | "DERIVED"
};

inline addr parse_addr(const std::string& s) { return addr(s); }

inline std::vector<golden_vector> load_golden(const std::string& path) {
    nlohmann::json doc = nlohmann::json::parse(read_file(path));
    std::vector<golden_vector> out;
    for (const auto& v : doc.at("vectors")) {
        golden_vector g;
        g.model = v.at("model").get<std::string>();
        g.start_node = v.at("start").at("node").get<std::string>();
        g.start_addr = parse_addr(v.at("start").at("addr").get<std::string>());
        g.provenance = v.at("provenance").get<std::string>();
        const auto& expect = v.at("expect");
        if (expect.contains("loop") && expect.at("loop").get<bool>()) {
            g.expect_loop = true;
        } else {
            for (const auto& n : expect.at("names"))
                g.expect.emplace_back(n.at("node").get<std::string>(),
                                      parse_addr(n.at("addr").get<std::string>()));
            std::sort(g.expect.begin(), g.expect.end());
        }
        out.push_back(std::move(g));
    }
    return out;
}

struct golden_failure {
    golden_vector vector;
    std::string message;
};

struct golden_report {
    std::size_t passed = 0;
    std::vector<golden_failure> failures;
    bool ok() const { return failures.empty(); }
};

inline golden_report run_golden(const std::vector<golden_vector>& vectors,
                                const std::string& dir) {
    golden_report report;
    std::map<std::string, std::pair<net, symbol_table>> cache;
    for (const auto& g : vectors) {
        auto it = cache.find(g.model);
        if (it == cache.end())
            it = cache.emplace(g.model, load_model(dir + "/" + g.model)).first;
        const auto& [nt, symbols] = it->second;
        if (!symbols.contains(g.start_node)) {
            report.failures.push_back({g, "unknown start node " + g.start_node});
            continue;
        }
        name start{symbols.id_of(g.start_node), g.start_addr};
        try {
            std::set<name> got = resolve(nt, start);
            if (g.expect_loop) {
                report.failures.push_back({g, "expected a loop, got a result"});
                continue;
            }
            std::vector<std::pair<std::string, addr>> got_named;
            for (const name& n : got)
                got_named.emplace_back(symbols.name_of(n.node), n.address);
            std::sort(got_named.begin(), got_named.end());
            if (got_named != g.expect) {
                std::ostringstream os;
                os << "mismatch, got {";
                for (std::size_t i = 0; i < got_named.size(); ++i)
                    os << (i ? ", " : "") << got_named[i].first << " @ "
                       << hex(got_named[i].second);
                os << "}";
                report.failures.push_back({g, os.str()});
                continue;
            }
            report.passed++;
        } catch (const loop_error&) {
            if (g.expect_loop)
                report.passed++;
            else
                report.failures.push_back({g, "unexpected decoding loop"});
        }
    }
    return report;
}

} // namespace dnet
