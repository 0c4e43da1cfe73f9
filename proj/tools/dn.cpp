// Command-line front end for decoding-net models: validation, resolution,
// flattening, splitting, equivalence checking and export over .dn files.

#include <cstdio>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <dnet/dnet.hpp>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_parse = 1;
constexpr int exit_loop = 2;
constexpr int exit_unequal = 3;
constexpr int exit_usage = 64;
constexpr int exit_io = 74;

struct load_result {
    dnet::net model;
    dnet::symbol_table symbols;
    dnet::net_spec decls;
};

load_result load(const std::string& path, bool allow_dangling) {
    dnet::net_ast ast = dnet::parse(dnet::read_file(path));
    dnet::resolved_spec spec = dnet::resolve_names(ast, allow_dangling);
    for (const auto& w : spec.warnings)
        std::cerr << path << ": warning: " << w << "\n";
    load_result out;
    out.model = dnet::elaborate(spec.decls, allow_dangling);
    out.symbols = std::move(spec.symbols);
    out.decls = std::move(spec.decls);
    return out;
}

dnet::node_id node_by_name(const load_result& m, const std::string& name) {
    if (!m.symbols.contains(name))
        throw dnet::elaborate_error({}, "unknown node '" + name + "'");
    return m.symbols.id_of(name);
}

dnet::addr parse_cli_addr(const std::string& text) {
    try {
        return dnet::addr(text);
    } catch (const std::exception&) {
        throw dnet::elaborate_error({}, "invalid address '" + text + "'");
    }
}

std::string render_names(const std::set<dnet::name>& names,
                         const dnet::symbol_table& symbols) {
    std::string out = "{";
    bool first = true;
    for (const auto& n : names) {
        out += (first ? "" : ", ") + dnet::format_name(n, symbols);
        first = false;
    }
    return out + "}";
}

int cmd_check(const std::string& file, bool allow_dangling) {
    load_result m = load(file, allow_dangling);
    std::set<dnet::addr> witness = dnet::derive_witness_addresses(m.model);
    std::vector<dnet::name> looping;
    for (const auto& [nd, desc] : m.model.nodes()) {
        (void)desc;
        for (const auto& a : witness) {
            if (!dnet::is_in_domain(m.model, dnet::name{nd, a})) {
                looping.push_back(dnet::name{nd, a});
                break; // one witness per node is enough to report
            }
        }
    }
    if (!looping.empty()) {
        for (const auto& n : looping)
            std::cout << "loop: " << dnet::format_name(n, m.symbols) << "\n";
        return exit_loop;
    }
    std::cout << "ok: " << m.model.nodes().size() << " nodes, " << witness.size()
              << " witness addresses, no decoding loops\n";
    return exit_ok;
}

int cmd_resolve(const std::string& file, const std::string& node,
                const std::string& addr_text, bool allow_dangling) {
    load_result m = load(file, allow_dangling);
    dnet::name n{node_by_name(m, node), parse_cli_addr(addr_text)};
    try {
        std::set<dnet::name> result = dnet::resolve(m.model, n);
        for (const auto& r : result)
            std::cout << dnet::format_name(r, m.symbols) << "\n";
        return exit_ok;
    } catch (const dnet::loop_error& e) {
        std::cerr << "decoding loop: " << dnet::format_cycle(e.cycle, m.symbols)
                  << "\n";
        return exit_loop;
    }
}

int cmd_flatten(const std::string& file, const std::vector<std::string>& observers,
                bool allow_dangling) {
    load_result m = load(file, allow_dangling);
    std::set<dnet::node_id> obs;
    if (observers.empty()) {
        for (const auto& [nd, desc] : m.model.nodes()) {
            (void)desc;
            if (m.symbols.has_id(nd))
                obs.insert(nd);
        }
    } else {
        for (const auto& name : observers)
            obs.insert(node_by_name(m, name));
    }
    try {
        std::vector<dnet::flat_view> views = dnet::flatten(m.model, obs);
        std::cout << "[";
        for (std::size_t i = 0; i < views.size(); ++i)
            std::cout << (i ? ",\n " : "") << dnet::to_json(views[i], m.symbols);
        std::cout << "]\n";
        return exit_ok;
    } catch (const dnet::interval_loop_error& e) {
        std::cerr << "decoding loop over [" << dnet::hex(e.interval.base) << ", "
                  << dnet::hex(e.interval.limit) << "] from observer "
                  << m.symbols.name_of(e.observer) << "\n";
        return exit_loop;
    }
}

int cmd_split(const std::string& file, bool allow_dangling) {
    load_result m = load(file, allow_dangling);
    dnet::net_spec split = dnet::split_spec(m.decls);
    std::cout << dnet::pretty_print(dnet::spec_to_ast(split, m.symbols));
    return exit_ok;
}

int cmd_rank(const std::string& file, const std::string& node,
             const std::string& addr_text, bool allow_dangling) {
    load_result m = load(file, allow_dangling);
    dnet::name n{node_by_name(m, node), parse_cli_addr(addr_text)};
    try {
        dnet::ranking r = dnet::compute_ranking(m.model, n);
        std::cout << dnet::to_json(r, m.symbols) << "\n";
        return exit_ok;
    } catch (const dnet::loop_error& e) {
        std::cerr << "not in domain, decoding loop: "
                  << dnet::format_cycle(e.cycle, m.symbols) << "\n";
        return exit_loop;
    }
}

int cmd_dot(const std::string& file, bool allow_dangling) {
    load_result m = load(file, allow_dangling);
    std::cout << "digraph decoding_net {\n";
    for (const auto& [nd, desc] : m.model.nodes()) {
        (void)desc;
        std::cout << "  n" << nd << " [label=\"" << m.symbols.name_of(nd) << "\"];\n";
    }
    for (const auto& [nd, desc] : m.model.nodes()) {
        for (const auto& entry : desc.maps)
            for (const auto& d : entry.dests)
                std::cout << "  n" << nd << " -> n" << d.node << " [label=\""
                          << dnet::hex(entry.src.base) << "-"
                          << dnet::hex(entry.src.limit) << "\"];\n";
        if (desc.overlay)
            std::cout << "  n" << nd << " -> n" << *desc.overlay
                      << " [label=\"over\", style=dashed];\n";
    }
    std::cout << "}\n";
    return exit_ok;
}

int cmd_equiv(const std::string& left_file, const std::string& right_file,
              const std::vector<std::string>& maps,
              const std::vector<std::string>& observers, bool auto_split_map,
              std::size_t max_witnesses, bool allow_dangling) {
    load_result left = load(left_file, allow_dangling);
    load_result right = load(right_file, allow_dangling);

    // Left node names are renamed into the right net's id space; names
    // missing on the right get synthetic ids.  --map A=B overrides the
    // name-based correspondence; --auto-split-map sends each left node to
    // its split acceptor "<name>_acc" when the right net declares one.
    std::map<std::string, std::string> rename;
    for (const auto& spec : maps) {
        auto eq = spec.find('=');
        if (eq == std::string::npos)
            throw dnet::elaborate_error({}, "--map expects A=B, got '" + spec + "'");
        rename[spec.substr(0, eq)] = spec.substr(eq + 1);
    }

    dnet::node_id synthetic = right.model.max_id() + 1;
    std::map<dnet::node_id, dnet::node_id> left_to_common;
    std::map<dnet::node_id, std::string> display;
    for (const auto& [nd, desc] : right.model.nodes()) {
        (void)desc;
        if (right.symbols.has_id(nd))
            display[nd] = right.symbols.name_of(nd);
    }
    for (const auto& [nd, desc] : left.model.nodes()) {
        (void)desc;
        if (!left.symbols.has_id(nd))
            continue;
        std::string name = left.symbols.name_of(nd);
        std::string target = name;
        if (auto it = rename.find(name); it != rename.end())
            target = it->second;
        else if (auto_split_map && right.symbols.contains(name + "_acc"))
            target = name + "_acc";
        if (right.symbols.contains(target)) {
            left_to_common[nd] = right.symbols.id_of(target);
        } else {
            left_to_common[nd] = synthetic;
            display[synthetic] = target;
            synthetic++;
        }
    }

    std::set<dnet::node_id> obs;
    if (observers.empty()) {
        for (const auto& [nd, desc] : left.model.nodes()) {
            (void)desc;
            if (left.symbols.has_id(nd) &&
                right.symbols.contains(left.symbols.name_of(nd)))
                obs.insert(nd);
        }
    } else {
        for (const auto& name : observers)
            obs.insert(node_by_name(left, name));
    }
    // observers are named in left terms; the right net resolves them by name
    std::map<dnet::node_id, dnet::node_id> obs_left_to_right;
    for (dnet::node_id o : obs)
        obs_left_to_right[o] = right.symbols.id_of(left.symbols.name_of(o));

    std::set<dnet::addr> witness = dnet::derive_witness_addresses(left.model);
    for (const auto& a : dnet::derive_witness_addresses(right.model))
        witness.insert(a);

    auto render = [&](const std::optional<std::set<dnet::name>>& names) {
        if (!names)
            return std::string("loop");
        std::string out = "{";
        bool first = true;
        for (const auto& n : *names) {
            auto it = display.find(n.node);
            std::string label =
                it != display.end() ? it->second : "#" + std::to_string(n.node);
            out += (first ? "" : ", ") + label + " @ " + dnet::hex(n.address);
            first = false;
        }
        return out + "}";
    };

    bool equal = true;
    std::size_t shown = 0;
    for (dnet::node_id o : obs) {
        dnet::node_id ro = obs_left_to_right.at(o);
        for (const auto& a : witness) {
            dnet::name ln{o, a};
            dnet::name rn{ro, a};
            bool dl = dnet::is_in_domain(left.model, ln);
            bool dr = dnet::is_in_domain(right.model, rn);
            std::optional<std::set<dnet::name>> rl, rr;
            if (dl)
                rl = dnet::rename_names(
                    dnet::table_remap(left_to_common), dnet::resolve(left.model, ln));
            if (dr)
                rr = dnet::resolve(right.model, rn);
            if (dl != dr || (dl && *rl != *rr)) {
                equal = false;
                if (shown < max_witnesses) {
                    std::cerr << "observer " << left.symbols.name_of(o) << " @ "
                              << dnet::hex(a) << ": left " << render(rl)
                              << " right " << render(rr) << "\n";
                    shown++;
                }
            }
        }
    }
    if (equal) {
        std::cout << "equivalent: " << obs.size() << " observers, "
                  << witness.size() << " witness addresses\n";
        return exit_ok;
    }
    return exit_unequal;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"decoding-net model tool"};
    app.require_subcommand(1);
    bool allow_dangling = false;
    app.add_flag("--allow-dangling", allow_dangling,
                 "treat references to undeclared nodes as empty nodes");

    std::string file, node, address, right_file;
    std::vector<std::string> observers, maps;
    bool auto_split_map = false;
    std::size_t max_witnesses = 16;

    CLI::App* check = app.add_subcommand("check", "validate a model and scan for decoding loops");
    check->add_option("file", file)->required();

    CLI::App* resolve = app.add_subcommand("resolve", "resolve one name to its accepted set");
    resolve->add_option("file", file)->required();
    resolve->add_option("node", node)->required();
    resolve->add_option("addr", address)->required();

    CLI::App* flatten = app.add_subcommand("flatten", "print flat views as JSON");
    flatten->add_option("file", file)->required();
    flatten->add_option("--observer", observers, "observer node (repeatable; default all)");

    CLI::App* split = app.add_subcommand("split", "split every node into acceptor and redirector");
    split->add_option("file", file)->required();

    CLI::App* equiv = app.add_subcommand("equiv", "check view equivalence of two models");
    equiv->add_option("left", file)->required();
    equiv->add_option("right", right_file)->required();
    equiv->add_option("--map", maps, "rename left node A to right node B (A=B)");
    equiv->add_option("--observers", observers, "observer node names");
    equiv->add_flag("--auto-split-map", auto_split_map,
                    "map each left node to its '<name>_acc' acceptor when present");
    equiv->add_option("--max-witnesses", max_witnesses, "failure report cap");

    CLI::App* rank = app.add_subcommand("rank", "print a well-formed ranking witness as JSON");
    rank->add_option("file", file)->required();
    rank->add_option("node", node)->required();
    rank->add_option("addr", address)->required();

    CLI::App* dot = app.add_subcommand("dot", "export the node-level decode graph as DOT");
    dot->add_option("file", file)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return exit_usage;
    }

    try {
        if (check->parsed())
            return cmd_check(file, allow_dangling);
        if (resolve->parsed())
            return cmd_resolve(file, node, address, allow_dangling);
        if (flatten->parsed())
            return cmd_flatten(file, observers, allow_dangling);
        if (split->parsed())
            return cmd_split(file, allow_dangling);
        if (equiv->parsed())
            return cmd_equiv(file, right_file, maps, observers, auto_split_map,
                             max_witnesses, allow_dangling);
        if (rank->parsed())
            return cmd_rank(file, node, address, allow_dangling);
        if (dot->parsed())
            return cmd_dot(file, allow_dangling);
    } catch (const dnet::io_error& e) {
        std::cerr << e.what() << "\n";
        return exit_io;
    } catch (const dnet::parse_error& e) {
        std::cerr << file << ": " << e.what() << "\n";
        return exit_parse;
    } catch (const dnet::elaborate_error& e) {
        std::cerr << e.what() << "\n";
        return exit_parse;
    } catch (const dnet::dangling_node_error& e) {
        std::cerr << e.what() << " (use --allow-dangling to treat them as empty)\n";
        return exit_parse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_parse;
    }
    return exit_usage;
}
