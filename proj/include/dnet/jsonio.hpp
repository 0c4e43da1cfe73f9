#pragma once

#include <sstream>
#include <string>

#include "decode.hpp"
#include "elaborate.hpp"
#include "flatten.hpp"
#include "model.hpp"
#include "syntax.hpp"

namespace dnet {

// Hand-rolled emitters: output must be byte-stable across runs, with
// canonical ordering and lowercase minimal-digit hex.

inline std::string to_json(const flat_view& view, const symbol_table& symbols) {
    std::ostringstream os;
    os << "{\"observer\": \"" << symbols.name_of(view.observer) << "\", \"pieces\": [";
    for (std::size_t i = 0; i < view.pieces.size(); ++i) {
        const auto& p = view.pieces[i];
        os << (i ? ", " : "") << "{\"base\": \"" << hex(p.src.base)
           << "\", \"limit\": \"" << hex(p.src.limit) << "\", \"targets\": [";
        std::size_t j = 0;
        for (const auto& t : p.targets) {
            os << (j++ ? ", " : "") << "{\"node\": \"" << symbols.name_of(t.node)
               << "\", \"dest_base\": \"" << hex(t.dest_base) << "\"}";
        }
        os << "]}";
    }
    os << "]}";
    return os.str();
}

inline std::string to_json(const ranking& r, const symbol_table& symbols) {
    std::ostringstream os;
    os << "{\"ranks\": [";
    std::size_t i = 0;
    for (const auto& [n, rank] : r.ranks) {
        os << (i++ ? ", " : "") << "{\"node\": \"" << symbols.name_of(n.node)
           << "\", \"addr\": \"" << hex(n.address) << "\", \"rank\": " << rank << "}";
    }
    os << "]}";
    return os.str();
}

inline std::string format_name(const name& n, const symbol_table& symbols) {
    return symbols.name_of(n.node) + " @ " + hex(n.address);
}

inline std::string format_cycle(const std::vector<name>& cycle,
                                const symbol_table& symbols) {
    std::ostringstream os;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        os << (i ? " -> " : "") << "(" << symbols.name_of(cycle[i].node) << ","
           << hex(cycle[i].address) << ")";
    }
    return os.str();
}

} // namespace dnet
