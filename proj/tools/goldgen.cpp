// Regenerates the computed golden vectors from the fixture models with the
// breadth-first reachability oracle (accepted names within the reachable
// set), independent of the resolver.  --check verifies the checked-in values;
// --print emits the regenerated vectors as JSON.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <dnet/dnet.hpp>

namespace {

using namespace dnet;

struct oracle_result {
    bool loop = false;
    std::vector<std::pair<std::string, addr>> names;
};

oracle_result bfs_oracle(const net& nt, const symbol_table& symbols, const name& start) {
    oracle_result out;
    if (!is_in_domain(nt, start)) {
        out.loop = true;
        return out;
    }
    for (const name& n : reachable_names(nt, start))
        if (accepted_contains(nt, n))
            out.names.emplace_back(symbols.name_of(n.node), n.address);
    std::sort(out.names.begin(), out.names.end());
    return out;
}

std::string render(const oracle_result& r) {
    if (r.loop)
        return "{\"loop\": true}";
    std::string out = "{\"names\": [";
    for (std::size_t i = 0; i < r.names.size(); ++i)
        out += std::string(i ? ", " : "") + "{\"node\": \"" + r.names[i].first +
               "\", \"addr\": \"" + hex(r.names[i].second) + "\"}";
    return out + "]}";
}

} // namespace

int main(int argc, char** argv) {
    std::string dir;
    bool print_mode = false;
    std::vector<std::string> files;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--print")
            print_mode = true;
        else if (arg == "--dir" && i + 1 < argc)
            dir = argv[++i];
        else
            files.push_back(arg);
    }
    if (dir.empty() || files.empty()) {
        std::cerr << "usage: dn-goldgen --dir <fixture-dir> [--print] <golden.json>...\n";
        return 64;
    }

    std::size_t checked = 0, mismatches = 0;
    std::map<std::string, std::pair<net, symbol_table>> cache;
    for (const auto& file : files) {
        std::vector<golden_vector> vectors;
        try {
            vectors = load_golden(dir + "/" + file);
        } catch (const std::exception& e) {
            std::cerr << file << ": " << e.what() << "\n";
            return 74;
        }
        for (const auto& v : vectors) {
            if (v.provenance != "computed")
                continue;
            auto it = cache.find(v.model);
            if (it == cache.end())
                it = cache.emplace(v.model, load_model(dir + "/" + v.model)).first;
            const auto& [nt, symbols] = it->second;
            oracle_result got =
                bfs_oracle(nt, symbols, name{symbols.id_of(v.start_node), v.start_addr});
            checked++;
            if (print_mode) {
                std::cout << v.model << " " << v.start_node << " " << hex(v.start_addr)
                          << " -> " << render(got) << "\n";
                continue;
            }
            bool match = v.expect_loop ? got.loop : (!got.loop && got.names == v.expect);
            if (!match) {
                mismatches++;
                std::cerr << file << ": " << v.start_node << " @ " << hex(v.start_addr)
                          << ": checked-in vector disagrees with the oracle: "
                          << render(got) << "\n";
            }
        }
    }
    if (print_mode)
        return 0;
    if (mismatches) {
        std::cerr << mismatches << " of " << checked << " computed vectors disagree\n";
        return 1;
    }
    std::cout << "all " << checked << " computed vectors match the oracle\n";
    return 0;
}
