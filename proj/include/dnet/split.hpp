#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "elaborate.hpp"
#include "model.hpp"

namespace dnet {

struct split_error : std::runtime_error {
    explicit split_error(const std::string& msg) : std::runtime_error(msg) {}
};

namespace detail {

// Redirector: accepts nothing; forwards each former accept block 1-1 to the
// acceptor, ahead of the existing maps; overlay unchanged.
inline node redirector_node(node_id acceptor, const node& n) {
    node out;
    for (const auto& b : n.accept)
        out.maps.push_back(map_entry{b, {destination{acceptor, b.base}}});
    out.maps.insert(out.maps.end(), n.maps.begin(), n.maps.end());
    out.overlay = n.overlay;
    return out;
}

// Acceptor: keeps the accept set, translates nothing.
inline node acceptor_node(const node& n) {
    node out;
    out.accept = n.accept;
    return out;
}

} // namespace detail

// Split node nd into a pure redirector (keeps the id) and a pure acceptor at
// the fresh id.  Freshness relies on the closed-world invariant: an id that
// is not a key is referenced nowhere.
inline net split_node(const net& nt, node_id nd, node_id nd_fresh) {
    const node& old = nt.at(nd);
    if (nd_fresh == nd || nt.contains(nd_fresh))
        throw split_error("node id " + std::to_string(nd_fresh) + " is not fresh");
    std::map<node_id, node> nodes = nt.nodes();
    nodes[nd] = detail::redirector_node(nd_fresh, old);
    nodes[nd_fresh] = detail::acceptor_node(old);
    return net::from_nodes(std::move(nodes));
}

// Fold split_node right-to-left over nds.
inline net split_all(const net& nt, const std::vector<node_id>& nds,
                     const std::function<node_id(node_id)>& fresh_of) {
    std::set<node_id> seen;
    std::set<node_id> fresh_seen;
    for (node_id nd : nds) {
        if (!seen.insert(nd).second)
            throw split_error("duplicate node id " + std::to_string(nd) +
                              " in split list");
        node_id f = fresh_of(nd);
        if (nt.contains(f) || !fresh_seen.insert(f).second)
            throw split_error("node id " + std::to_string(f) + " is not fresh");
    }
    net out = nt;
    for (auto it = nds.rbegin(); it != nds.rend(); ++it)
        out = split_node(out, *it, fresh_of(*it));
    return out;
}

// Syntactic split on the resolved spec: each declaration (nd, s) becomes the
// acceptor at nd + c followed by the redirector at nd, with c the first
// fresh id of the whole spec.  Declaration order is preserved.
inline net_spec split_spec(const net_spec& spec) {
    node_id off = fresh_id(spec);
    std::set<node_id> seen;
    for (const auto& [id, n] : spec) {
        (void)n;
        if (!seen.insert(id).second)
            throw split_error("duplicate declaration of node id " + std::to_string(id));
    }
    net_spec out;
    for (const auto& [id, n] : spec) {
        out.emplace_back(off + id, detail::acceptor_node(n));
        out.emplace_back(id, detail::redirector_node(off + id, n));
    }
    return out;
}

// Render a resolved spec back to concrete syntax.  Ids carried over from
// `symbols` keep their names; new ids (acceptors introduced by split_spec at
// nd + c) get the original name with an "_acc" suffix, uniquified.
inline net_ast spec_to_ast(const net_spec& spec, const symbol_table& symbols) {
    std::set<std::string> taken;
    for (node_id i = 0; i < symbols.size(); ++i)
        taken.insert(symbols.name_of(i));

    node_id off = 0;
    for (const auto& [id, n] : spec) {
        (void)n;
        if (id >= symbols.size() && id + 1 - symbols.size() > off)
            off = id + 1 - symbols.size();
    }

    std::map<node_id, std::string> names;
    auto name_for = [&](node_id id) -> std::string {
        auto it = names.find(id);
        if (it != names.end())
            return it->second;
        std::string s;
        if (symbols.has_id(id)) {
            s = symbols.name_of(id);
        } else {
            node_id base = id >= off ? id - off : id;
            s = symbols.has_id(base) ? symbols.name_of(base) + "_acc"
                                     : "N" + std::to_string(id);
            while (taken.count(s))
                s += "_";
            taken.insert(s);
        }
        names.emplace(id, s);
        return s;
    };

    net_ast ast;
    for (const auto& [id, n] : spec) {
        decl_ast d;
        d.names.push_back(ident_ast{name_for(id), {}});
        for (const auto& b : n.accept)
            d.spec.accepts.push_back(block_ast{b.base, b.limit, {}});
        for (const auto& entry : n.maps) {
            map_ast m;
            m.src = block_ast{entry.src.base, entry.src.limit, {}};
            for (const auto& dest : entry.dests)
                m.dests.push_back(dest_ast{name_for(dest.node),
                                           std::optional<addr>(dest.base), {}});
            d.spec.maps.push_back(std::move(m));
        }
        if (n.overlay)
            d.spec.overlay = overlay_ast{name_for(*n.overlay), {}};
        ast.decls.push_back(std::move(d));
    }
    return ast;
}

} // namespace dnet
