#pragma once

#include <map>
#include <tuple>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "decode.hpp"
#include "model.hpp"

namespace dnet {

struct flat_target {
    node_id node = 0;
    addr dest_base; // destination address at the start of the piece

    friend bool operator==(const flat_target& a, const flat_target& b) {
        return a.node == b.node && a.dest_base == b.dest_base;
    }
    friend bool operator<(const flat_target& a, const flat_target& b) {
        if (a.node != b.node)
            return a.node < b.node;
        return a.dest_base < b.dest_base;
    }
};

// For a in src: resolve(observer, a) contains (t.node, t.dest_base + (a - src.base))
// for every target t.  Addresses in no piece resolve to the empty set.
struct flat_piece {
    block src;
    std::set<flat_target> targets;
};

struct flat_view {
    node_id observer = 0;
    std::vector<flat_piece> pieces; // sorted, pairwise disjoint
};

struct interval_loop_error : std::runtime_error {
    node_id observer;
    block interval; // observer addresses caught in the cycle
    std::vector<node_id> cycle;
    interval_loop_error(node_id obs, block ival, std::vector<node_id> cyc)
        : std::runtime_error("decoding loop over an address interval"),
          observer(obs), interval(std::move(ival)), cycle(std::move(cyc)) {}
};

namespace detail {

// Right-open-ended interval in observer address space; nullopt hi = unbounded
// (only overlay chains propagate the full space).
struct span {
    addr lo;
    std::optional<addr> hi;

    bool bounded() const { return hi.has_value(); }
};

// Intersect the current addresses (observer span + shift) with a block,
// returning the overlap pulled back to observer space.
inline std::optional<span> pull_back(const span& s, const boost::multiprecision::cpp_int& shift,
                                     const block& b) {
    addr lo = s.lo + shift;
    if (lo < b.base)
        lo = b.base;
    addr hi = b.limit;
    if (s.bounded() && *s.hi + shift < hi)
        hi = *s.hi + shift;
    if (lo > hi)
        return std::nullopt;
    return span{lo - shift, hi - shift};
}

struct flatten_sink {
    // emitted pieces, in observer space
    std::vector<flat_piece> pieces;
    // every pulled-back block boundary met along any path (witness harvesting)
    std::vector<block> boundaries;
    bool harvest = false;
    bool strict = true;
    bool saw_loop = false;
    // Per (node, shift): observer-space intervals already propagated.  Any
    // address reaches a configuration at most once, which keeps propagation
    // near-linear; a revisit of an identical configuration emits exactly the
    // pieces the first visit already emitted.
    std::map<std::pair<node_id, boost::multiprecision::cpp_int>, std::map<addr, addr>>
        covered;
};

// Disjoint-interval bookkeeping for the covered map (keyed lo -> hi).
inline std::vector<std::pair<addr, addr>> uncovered_gaps(const std::map<addr, addr>& cov,
                                                         const addr& lo, const addr& hi) {
    std::vector<std::pair<addr, addr>> gaps;
    addr cur = lo;
    auto it = cov.upper_bound(lo);
    if (it != cov.begin()) {
        auto prev = std::prev(it);
        if (prev->second >= lo)
            cur = prev->second + 1;
    }
    for (; it != cov.end() && it->first <= hi && cur <= hi; ++it) {
        if (it->first > cur)
            gaps.emplace_back(cur, it->first - 1);
        if (it->second + 1 > cur)
            cur = it->second + 1;
    }
    if (cur <= hi)
        gaps.emplace_back(cur, hi);
    return gaps;
}

inline void mark_covered(std::map<addr, addr>& cov, addr lo, addr hi) {
    auto it = cov.upper_bound(lo);
    if (it != cov.begin()) {
        auto prev = std::prev(it);
        if (prev->second + 1 >= lo) {
            lo = prev->first;
            if (prev->second > hi)
                hi = prev->second;
            cov.erase(prev);
        }
    }
    it = cov.lower_bound(lo);
    while (it != cov.end() && it->first <= hi + 1) {
        if (it->second > hi)
            hi = it->second;
        it = cov.erase(it);
    }
    cov.emplace(lo, hi);
}

struct path_entry {
    node_id nd;
    boost::multiprecision::cpp_int shift;
};

inline void propagate(const net& nt, node_id observer, node_id nd, span s,
                      boost::multiprecision::cpp_int shift,
                      std::vector<path_entry>& path, flatten_sink& sink) {
    for (const auto& p : path) {
        if (p.nd == nd && p.shift == shift) {
            // every address in the span revisits itself: a genuine cycle
            if (sink.strict) {
                std::vector<node_id> cycle;
                for (auto it = path.begin(); it != path.end(); ++it)
                    if (it->nd == nd && it->shift == shift) {
                        for (; it != path.end(); ++it)
                            cycle.push_back(it->nd);
                        break;
                    }
                cycle.push_back(nd);
                addr hi = s.bounded() ? *s.hi : s.lo;
                throw interval_loop_error(observer, block{s.lo, hi}, std::move(cycle));
            }
            sink.saw_loop = true;
            return;
        }
    }

    // Unbounded spans travel only along overlay chains (out-degree one, no
    // fan-in blowup); bounded spans skip the already-propagated parts.
    if (s.bounded()) {
        auto& cov = sink.covered[{nd, shift}];
        auto gaps = uncovered_gaps(cov, s.lo, *s.hi);
        if (gaps.empty())
            return;
        if (gaps.size() != 1 || gaps[0].first != s.lo || gaps[0].second != *s.hi) {
            for (const auto& [lo, hi] : gaps)
                propagate(nt, observer, nd, span{lo, hi}, shift, path, sink);
            return;
        }
    }

    const node& desc = nt.at(nd);
    path.push_back(path_entry{nd, shift});

    for (const auto& b : desc.accept) {
        auto overlap = pull_back(s, shift, b);
        if (!overlap)
            continue;
        flat_piece piece;
        piece.src = block{overlap->lo, *overlap->hi};
        piece.targets.insert(flat_target{nd, overlap->lo + shift});
        sink.pieces.push_back(std::move(piece));
        if (sink.harvest)
            sink.boundaries.push_back(block{overlap->lo, *overlap->hi});
    }
    for (const auto& entry : desc.maps) {
        auto overlap = pull_back(s, shift, entry.src);
        if (!overlap)
            continue;
        if (sink.harvest)
            sink.boundaries.push_back(block{overlap->lo, *overlap->hi});
        for (const auto& d : entry.dests)
            propagate(nt, observer, d.node, *overlap,
                      shift + boost::multiprecision::cpp_int(d.base) - entry.src.base,
                      path, sink);
    }
    if (desc.overlay)
        propagate(nt, observer, *desc.overlay, s, shift, path, sink);

    path.pop_back();
    if (s.bounded())
        mark_covered(sink.covered[{nd, shift}], s.lo, *s.hi);
}

// Normalize raw overlapping pieces: split at every boundary, union targets
// per atomic interval, then merge neighbours whose targets describe the same
// affine family.
inline std::vector<flat_piece> normalize_pieces(std::vector<flat_piece> raw) {
    if (raw.empty())
        return raw;

    std::set<addr> cuts;
    for (const auto& p : raw) {
        cuts.insert(p.src.base);
        cuts.insert(p.src.limit + 1);
    }

    std::vector<flat_piece> atomic;
    std::vector<addr> points(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        block cell{points[i], points[i + 1] - 1};
        std::set<flat_target> targets;
        for (const auto& p : raw)
            if (p.src.base <= cell.base && cell.limit <= p.src.limit)
                for (const auto& t : p.targets)
                    targets.insert(
                        flat_target{t.node, t.dest_base + (cell.base - p.src.base)});
        if (!targets.empty())
            atomic.push_back(flat_piece{cell, std::move(targets)});
    }

    std::vector<flat_piece> merged;
    for (auto& piece : atomic) {
        if (!merged.empty()) {
            flat_piece& prev = merged.back();
            if (prev.src.limit + 1 == piece.src.base &&
                prev.targets.size() == piece.targets.size()) {
                addr gap = piece.src.base - prev.src.base;
                bool same = true;
                auto it = prev.targets.begin();
                auto jt = piece.targets.begin();
                for (; it != prev.targets.end(); ++it, ++jt)
                    if (it->node != jt->node || it->dest_base + gap != jt->dest_base) {
                        same = false;
                        break;
                    }
                if (same) {
                    prev.src.limit = piece.src.limit;
                    continue;
                }
            }
        }
        merged.push_back(std::move(piece));
    }
    return merged;
}

inline flatten_sink run_propagation(const net& nt, node_id observer, bool strict,
                                    bool harvest) {
    nt.at(observer);
    flatten_sink sink;
    sink.strict = strict;
    sink.harvest = harvest;
    std::vector<path_entry> path;
    propagate(nt, observer, observer, span{addr(0), std::nullopt}, 0, path, sink);
    return sink;
}

} // namespace detail

inline flat_view flatten_one(const net& nt, node_id observer) {
    detail::flatten_sink sink = detail::run_propagation(nt, observer, true, false);
    flat_view view;
    view.observer = observer;
    view.pieces = detail::normalize_pieces(std::move(sink.pieces));
    return view;
}

// Exact symbolic normal form of resolve for each observer, merged
// deterministically by observer id.
inline std::vector<flat_view> flatten(const net& nt, const std::set<node_id>& observers) {
    std::vector<flat_view> views;
    for (node_id obs : observers)
        views.push_back(flatten_one(nt, obs));
    return views;
}

// Evaluate a flat view at one address; the empty set on gaps.
inline std::set<name> flat_eval(const flat_view& view, const addr& a) {
    std::set<name> out;
    for (const auto& p : view.pieces) {
        if (p.src.limit < a)
            continue;
        if (a < p.src.base)
            break;
        for (const auto& t : p.targets)
            out.insert(name{t.node, t.dest_base + (a - p.src.base)});
    }
    return out;
}

} // namespace dnet
