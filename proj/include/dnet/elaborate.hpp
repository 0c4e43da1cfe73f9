#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "model.hpp"
#include "syntax.hpp"

namespace dnet {

struct elaborate_error : std::runtime_error {
    source_pos pos;
    elaborate_error(source_pos p, const std::string& msg)
        : std::runtime_error("error at " + std::to_string(p.line) + ":" +
                             std::to_string(p.col) + ": " + msg),
          pos(p) {}
};

// Bijective mapping between symbolic identifiers and dense node ids,
// assigned in declaration order starting at 0.
class symbol_table {
  public:
    node_id intern(const std::string& s) {
        auto it = ids_.find(s);
        if (it != ids_.end())
            return it->second;
        node_id id = names_.size();
        ids_.emplace(s, id);
        names_.push_back(s);
        return id;
    }

    bool contains(const std::string& s) const { return ids_.count(s) != 0; }

    node_id id_of(const std::string& s) const {
        auto it = ids_.find(s);
        if (it == ids_.end())
            throw std::out_of_range("unknown identifier " + s);
        return it->second;
    }

    const std::string& name_of(node_id id) const { return names_.at(id); }
    bool has_id(node_id id) const { return id < names_.size(); }
    std::size_t size() const { return names_.size(); }

  private:
    std::vector<std::string> names_;
    std::map<std::string, node_id> ids_;
};

// A net specification after name resolution: an ordered declaration list
// over numeric node ids.  `A, B are n` desugars into one entry per name.
using net_spec = std::vector<std::pair<node_id, node>>;

struct resolved_spec {
    net_spec decls;
    symbol_table symbols;
    std::vector<std::string> warnings;
};

inline resolved_spec resolve_names(const net_ast& ast, bool allow_dangling = false) {
    resolved_spec out;
    for (const auto& d : ast.decls)
        for (const auto& id : d.names) {
            if (out.symbols.contains(id.text))
                out.warnings.push_back("duplicate declaration of '" + id.text +
                                       "' at " + std::to_string(id.pos.line) + ":" +
                                       std::to_string(id.pos.col) +
                                       "; the later one wins");
            out.symbols.intern(id.text);
        }

    auto lookup = [&](const std::string& s, source_pos pos) -> node_id {
        if (out.symbols.contains(s))
            return out.symbols.id_of(s);
        if (!allow_dangling)
            throw elaborate_error(pos, "undeclared identifier '" + s + "'");
        return out.symbols.intern(s);
    };

    for (const auto& d : ast.decls) {
        node n;
        for (const auto& b : d.spec.accepts) {
            if (b.base > b.limit)
                throw elaborate_error(b.pos, "block base exceeds limit");
            n.accept.push_back(block{b.base, b.limit});
        }
        for (const auto& m : d.spec.maps) {
            if (m.src.base > m.src.limit)
                throw elaborate_error(m.src.pos, "block base exceeds limit");
            map_entry entry;
            entry.src = block{m.src.base, m.src.limit};
            for (const auto& dest : m.dests)
                entry.dests.push_back(destination{
                    lookup(dest.node, dest.pos), dest.at ? *dest.at : m.src.base});
            n.maps.push_back(std::move(entry));
        }
        if (d.spec.overlay)
            n.overlay = lookup(d.spec.overlay->node, d.spec.overlay->pos);
        for (const auto& id : d.names)
            out.decls.emplace_back(out.symbols.id_of(id.text), n);
    }
    return out;
}

// mk_net over the resolved declaration list.  A repeated id keeps the later
// declaration (the override is surfaced as a warning by resolve_names).
inline net elaborate(const net_spec& spec, bool allow_dangling = false) {
    std::map<node_id, node> nodes;
    for (const auto& [id, n] : spec)
        nodes[id] = n;
    return net::from_nodes(std::move(nodes), allow_dangling);
}

inline std::pair<net, symbol_table> elaborate(const net_ast& ast,
                                              bool allow_dangling = false) {
    resolved_spec r = resolve_names(ast, allow_dangling);
    return {elaborate(r.decls, allow_dangling), std::move(r.symbols)};
}

// First node id unused by the spec: 1 + the maximum id among declared ids,
// map destinations and overlays; 0 for the empty spec.
inline node_id fresh_id(const net_spec& spec) {
    node_id fresh = 0;
    auto bump = [&](node_id id) {
        if (id + 1 > fresh)
            fresh = id + 1;
    };
    for (const auto& [id, n] : spec) {
        bump(id);
        for (const auto& entry : n.maps)
            for (const auto& d : entry.dests)
                bump(d.node);
        if (n.overlay)
            bump(*n.overlay);
    }
    return fresh;
}

} // namespace dnet
