#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "decode.hpp"
#include "flatten.hpp"
#include "model.hpp"

namespace dnet {

// Renaming of nodes, leaving addresses intact.
using remap = std::function<node_id(node_id)>;

inline remap identity_remap() {
    return [](node_id nd) { return nd; };
}

inline remap offset_remap(node_id c) {
    return [c](node_id nd) { return nd + c; };
}

inline remap table_remap(std::map<node_id, node_id> table) {
    return [table = std::move(table)](node_id nd) {
        auto it = table.find(nd);
        return it == table.end() ? nd : it->second;
    };
}

inline std::set<name> rename_names(const remap& f, const std::set<name>& names) {
    std::set<name> out;
    for (const name& n : names)
        out.insert(name{f(n.node), n.address});
    return out;
}

struct equiv_failure {
    node_id observer = 0;
    addr address;
    // nullopt: the observer address is outside the resolution domain
    std::optional<std::set<name>> left;
    std::optional<std::set<name>> right;
};

struct equiv_report {
    bool equal = true;
    std::vector<equiv_failure> witnesses;
};

// view_eq_on: for each observer and witness address, domain membership must
// agree and the renamed resolution sets must coincide.  Failures are data,
// capped at max_witnesses.
inline equiv_report view_equiv(const remap& f, const net& left, const remap& g,
                               const net& right, const std::set<node_id>& observers,
                               const std::set<addr>& witness,
                               std::size_t max_witnesses = 16) {
    for (node_id obs : observers) {
        left.at(obs);
        right.at(obs);
    }
    resolver rl(left);
    resolver rr(right);
    equiv_report report;
    for (node_id obs : observers) {
        for (const addr& a : witness) {
            name n{obs, a};
            const std::set<name>* l = rl.try_resolve(n);
            const std::set<name>* r = rr.try_resolve(n);
            std::optional<std::set<name>> lr, rn;
            if (l)
                lr = rename_names(f, *l);
            if (r)
                rn = rename_names(g, *r);
            if ((l == nullptr) != (r == nullptr) || (l && *lr != *rn)) {
                report.equal = false;
                if (report.witnesses.size() < max_witnesses)
                    report.witnesses.push_back(equiv_failure{obs, a, lr, rn});
            }
        }
    }
    return report;
}

// Finite witness address set that hits every piece of every observer's flat
// view: around every block of every node, and every piece of every
// observer's (loop-tolerant) flat view, take {base-1, base, midpoint, limit,
// limit+1} clipped at zero, plus zero itself.  Views are piecewise affine
// with breakpoints only at these boundaries.
inline std::set<addr> derive_witness_addresses(const net& nt) {
    std::set<addr> out;
    out.insert(addr(0));
    auto add_block = [&](const block& b) {
        if (b.base > 0)
            out.insert(b.base - 1);
        out.insert(b.base);
        out.insert(b.base + (b.limit - b.base) / 2);
        out.insert(b.limit);
        out.insert(b.limit + 1);
    };
    for (const auto& [nd, desc] : nt.nodes()) {
        (void)nd;
        for (const auto& b : desc.accept)
            add_block(b);
        for (const auto& entry : desc.maps)
            add_block(entry.src);
    }
    for (const auto& [nd, desc] : nt.nodes()) {
        (void)desc;
        detail::flatten_sink sink = detail::run_propagation(nt, nd, false);
        for (const auto& piece : detail::normalize_pieces(std::move(sink.pieces)))
            add_block(piece.src);
    }
    return out;
}

} // namespace dnet
