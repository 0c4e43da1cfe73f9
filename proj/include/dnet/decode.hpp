#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <vector>

#include "model.hpp"

namespace dnet {

// One step of address decoding: the translate-set of node n.node at n.address.
// Union semantics: the overlay successor is present regardless of accept or
// map coverage.
inline std::set<name> decode_step(const net& nt, const name& n) {
    const node& nd = nt.at(n.node);
    std::set<name> out;
    for (const auto& entry : nd.maps) {
        if (!entry.src.contains(n.address))
            continue;
        addr off = n.address - entry.src.base;
        for (const auto& d : entry.dests)
            out.insert(name{d.node, d.base + off});
    }
    if (nd.overlay)
        out.insert(name{*nd.overlay, n.address});
    return out;
}

inline bool accepted_contains(const net& nt, const name& n) {
    const node& nd = nt.at(n.node);
    for (const auto& b : nd.accept)
        if (b.contains(n.address))
            return true;
    return false;
}

namespace detail {

// Iterative DFS over the name graph.  Each visitor sees (name, successors);
// the on-path check turns a revisit into a loop_error whose cycle runs from
// the first occurrence back to the repeated name.
struct dfs_walk {
    const net& nt;
    std::vector<name> path;
    std::map<name, std::size_t> on_path;

    explicit dfs_walk(const net& n) : nt(n) {}

    [[noreturn]] void raise_loop(const name& start, const name& repeat) {
        std::size_t first = on_path.at(repeat);
        std::vector<name> cycle(path.begin() + static_cast<std::ptrdiff_t>(first), path.end());
        cycle.push_back(repeat);
        throw loop_error(start, std::move(cycle));
    }
};

} // namespace detail

// Resolution: {n} if accepted, plus the union of resolve over all decode
// successors.  Depth-first with memoization of completed names; a name
// repeating on the current path signals n is outside the resolution domain.
inline std::set<name> resolve(const net& nt, const name& n0) {
    nt.at(n0.node);

    std::map<name, std::set<name>> memo;
    detail::dfs_walk walk(nt);

    struct frame {
        name n;
        std::vector<name> succ;
        std::size_t next = 0;
        std::set<name> acc;
    };
    std::vector<frame> stack;

    auto push = [&](const name& n) -> const std::set<name>* {
        auto done = memo.find(n);
        if (done != memo.end())
            return &done->second;
        if (walk.on_path.count(n))
            walk.raise_loop(n0, n);
        frame f;
        f.n = n;
        std::set<name> succ = decode_step(nt, n);
        f.succ.assign(succ.begin(), succ.end());
        if (accepted_contains(nt, n))
            f.acc.insert(n);
        walk.on_path.emplace(n, walk.path.size());
        walk.path.push_back(n);
        stack.push_back(std::move(f));
        return nullptr;
    };

    if (const std::set<name>* hit = push(n0))
        return *hit;
    while (!stack.empty()) {
        frame& f = stack.back();
        if (f.next < f.succ.size()) {
            const name& s = f.succ[f.next++];
            if (const std::set<name>* hit = push(s))
                f.acc.insert(hit->begin(), hit->end());
        } else {
            memo.emplace(f.n, f.acc);
            walk.on_path.erase(f.n);
            walk.path.pop_back();
            std::set<name> done = std::move(f.acc);
            stack.pop_back();
            if (stack.empty())
                return done;
            stack.back().acc.insert(done.begin(), done.end());
        }
    }
    return memo.at(n0);
}

// True iff every decode path from n is finite; cycle detection on the
// reachable name graph, independent of resolve.
inline bool is_in_domain(const net& nt, const name& n0) {
    nt.at(n0.node);

    enum class color : std::uint8_t { open, closed };
    std::map<name, color> seen;
    std::vector<std::pair<name, std::vector<name>>> stack;

    auto open_name = [&](const name& n) -> bool {
        auto it = seen.find(n);
        if (it != seen.end())
            return it->second == color::open;
        seen.emplace(n, color::open);
        std::set<name> succ = decode_step(nt, n);
        stack.emplace_back(n, std::vector<name>(succ.begin(), succ.end()));
        return false;
    };

    if (open_name(n0))
        return false;
    while (!stack.empty()) {
        auto& [n, succ] = stack.back();
        if (succ.empty()) {
            seen[n] = color::closed;
            stack.pop_back();
            continue;
        }
        name next = succ.back();
        succ.pop_back();
        if (open_name(next))
            return false;
    }
    return true;
}

// Reflexive-transitive decode image of {n}: plain breadth-first search, no
// sharing with resolve.  Requires n to be in the resolution domain.
inline std::set<name> reachable_names(const net& nt, const name& n0) {
    nt.at(n0.node);
    if (!is_in_domain(nt, n0))
        throw loop_error(n0, {});

    std::set<name> seen{n0};
    std::deque<name> queue{n0};
    while (!queue.empty()) {
        name n = queue.front();
        queue.pop_front();
        for (const name& s : decode_step(nt, n))
            if (seen.insert(s).second)
                queue.push_back(s);
    }
    return seen;
}

// Ranking witness: rank = longest path to a sink over the reachable acyclic
// name graph, so ranks strictly decrease along every decode step.
struct ranking {
    std::map<name, std::uint64_t> ranks;
};

inline ranking compute_ranking(const net& nt, const name& n0) {
    nt.at(n0.node);

    ranking result;
    detail::dfs_walk walk(nt);

    struct frame {
        name n;
        std::vector<name> succ;
        std::size_t next = 0;
        std::uint64_t best = 0;
    };
    std::vector<frame> stack;

    auto push = [&](const name& n) -> const std::uint64_t* {
        auto done = result.ranks.find(n);
        if (done != result.ranks.end())
            return &done->second;
        if (walk.on_path.count(n))
            walk.raise_loop(n0, n);
        frame f;
        f.n = n;
        std::set<name> succ = decode_step(nt, n);
        f.succ.assign(succ.begin(), succ.end());
        walk.on_path.emplace(n, walk.path.size());
        walk.path.push_back(n);
        stack.push_back(std::move(f));
        return nullptr;
    };

    auto note = [](frame& f, std::uint64_t child) {
        if (child + 1 > f.best)
            f.best = child + 1;
    };

    if (push(n0) != nullptr)
        return result; // n0 already ranked (unreachable: fresh state)
    while (!stack.empty()) {
        frame& f = stack.back();
        if (f.next < f.succ.size()) {
            const name& s = f.succ[f.next++];
            if (const std::uint64_t* hit = push(s))
                note(f, *hit);
        } else {
            result.ranks.emplace(f.n, f.best);
            walk.on_path.erase(f.n);
            walk.path.pop_back();
            std::uint64_t done = f.best;
            stack.pop_back();
            if (!stack.empty())
                note(stack.back(), done);
        }
    }
    return result;
}

// wf_rank: for every reachable name x and every decode step x -> y,
// rank(y) < rank(x).  Every reachable name must be ranked.
inline bool wf_rank(const net& nt, const ranking& r, const name& n0) {
    std::set<name> reach;
    try {
        reach = reachable_names(nt, n0);
    } catch (const loop_error&) {
        return false;
    }
    for (const name& x : reach) {
        auto rx = r.ranks.find(x);
        if (rx == r.ranks.end())
            return false;
        for (const name& y : decode_step(nt, x)) {
            auto ry = r.ranks.find(y);
            if (ry == r.ranks.end() || !(ry->second < rx->second))
                return false;
        }
    }
    return true;
}

// Resolution with a memo that persists across queries: each name's accepted
// closure and domain status is computed once per net.  try_resolve returns
// nullptr for names outside the resolution domain.
class resolver {
  public:
    explicit resolver(const net& nt) : nt_(&nt) {}

    const std::set<name>* try_resolve(const name& n) {
        auto bad = out_.find(n);
        if (bad != out_.end())
            return nullptr;
        auto hit = memo_.find(n);
        if (hit != memo_.end())
            return &hit->second;
        try {
            return &run(n);
        } catch (const loop_error&) {
            out_.insert(n);
            return nullptr;
        }
    }

    bool in_domain(const name& n) { return try_resolve(n) != nullptr; }

    const std::set<name>& resolve(const name& n) {
        if (const std::set<name>* r = try_resolve(n))
            return *r;
        throw loop_error(n, {});
    }

  private:
    const net* nt_;
    std::map<name, std::set<name>> memo_;
    std::set<name> out_;

    const std::set<name>& run(const name& n0) {
        nt_->at(n0.node);
        detail::dfs_walk walk(*nt_);

        struct frame {
            name n;
            std::vector<name> succ;
            std::size_t next = 0;
            std::set<name> acc;
        };
        std::vector<frame> stack;

        auto push = [&](const name& n) -> const std::set<name>* {
            auto done = memo_.find(n);
            if (done != memo_.end())
                return &done->second;
            if (out_.count(n))
                throw loop_error(n0, {});
            if (walk.on_path.count(n))
                walk.raise_loop(n0, n);
            frame f;
            f.n = n;
            std::set<name> succ = decode_step(*nt_, n);
            f.succ.assign(succ.begin(), succ.end());
            if (accepted_contains(*nt_, n))
                f.acc.insert(n);
            walk.on_path.emplace(n, walk.path.size());
            walk.path.push_back(n);
            stack.push_back(std::move(f));
            return nullptr;
        };

        if (const std::set<name>* hit = push(n0))
            return *hit;
        while (!stack.empty()) {
            frame& f = stack.back();
            if (f.next < f.succ.size()) {
                const name& s = f.succ[f.next++];
                if (const std::set<name>* hit = push(s))
                    f.acc.insert(hit->begin(), hit->end());
            } else {
                auto it = memo_.emplace(f.n, std::move(f.acc)).first;
                walk.on_path.erase(f.n);
                walk.path.pop_back();
                stack.pop_back();
                if (!stack.empty())
                    stack.back().acc.insert(it->second.begin(), it->second.end());
            }
        }
        return memo_.at(n0);
    }
};

// Pointwise resolution from one observer over a witness address set.
inline std::map<addr, std::set<name>> view_from(const net& nt, node_id observer,
                                                const std::set<addr>& addrs) {
    nt.at(observer);
    std::map<addr, std::set<name>> view;
    for (const addr& a : addrs)
        view.emplace(a, resolve(nt, name{observer, a}));
    return view;
}

} // namespace dnet
