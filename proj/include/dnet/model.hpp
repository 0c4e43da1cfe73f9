#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace dnet {

// Addresses are unbounded nonnegative integers; interrupt vectors and
// MSI address+data concatenations (>= 96 bits) use the same type.
using addr = boost::multiprecision::cpp_int;

using node_id = std::uint64_t;

// A name qualifies an address by the node at which decoding starts.
struct name {
    node_id node = 0;
    addr address;

    friend bool operator==(const name& a, const name& b) {
        return a.node == b.node && a.address == b.address;
    }
    friend bool operator!=(const name& a, const name& b) { return !(a == b); }
    friend bool operator<(const name& a, const name& b) {
        if (a.node != b.node)
            return a.node < b.node;
        return a.address < b.address;
    }
};

// Closed interval [base, limit].
struct block {
    addr base;
    addr limit;

    bool contains(const addr& a) const { return base <= a && a <= limit; }

    friend bool operator==(const block& a, const block& b) {
        return a.base == b.base && a.limit == b.limit;
    }
    friend bool operator<(const block& a, const block& b) {
        if (a.base != b.base)
            return a.base < b.base;
        return a.limit < b.limit;
    }
};

struct destination {
    node_id node = 0;
    addr base;

    friend bool operator==(const destination& a, const destination& b) {
        return a.node == b.node && a.base == b.base;
    }
};

// An address a in src translates, for each destination, to
// (dest.node, dest.base + (a - src.base)).
struct map_entry {
    block src;
    std::vector<destination> dests;

    friend bool operator==(const map_entry& a, const map_entry& b) {
        return a.src == b.src && a.dests == b.dests;
    }
};

// Accept blocks and map sources may overlap; a node may both accept and
// translate an address.  The overlay forwards every address 1-1 and is
// combined with explicit maps by union.
struct node {
    std::vector<block> accept;
    std::vector<map_entry> maps;
    std::optional<node_id> overlay;

    bool empty() const { return accept.empty() && maps.empty() && !overlay; }

    friend bool operator==(const node& a, const node& b) {
        return a.accept == b.accept && a.maps == b.maps && a.overlay == b.overlay;
    }
};

struct unknown_node_error : std::runtime_error {
    node_id id;
    explicit unknown_node_error(node_id nd)
        : std::runtime_error("unknown node id " + std::to_string(nd)), id(nd) {}
};

struct dangling_node_error : std::runtime_error {
    std::vector<node_id> missing;
    explicit dangling_node_error(std::vector<node_id> ids)
        : std::runtime_error(describe(ids)), missing(std::move(ids)) {}

  private:
    static std::string describe(const std::vector<node_id>& ids) {
        std::string s = "dangling node reference(s):";
        for (node_id nd : ids)
            s += " " + std::to_string(nd);
        return s;
    }
};

struct invalid_block_error : std::runtime_error {
    block bad;
    explicit invalid_block_error(block b)
        : std::runtime_error("block base exceeds limit"), bad(std::move(b)) {}
};

// A name-level decoding cycle; `cycle` starts and ends with the repeated name.
struct loop_error : std::runtime_error {
    name start;
    std::vector<name> cycle;
    loop_error(name n, std::vector<name> c)
        : std::runtime_error("decoding loop detected"), start(std::move(n)),
          cycle(std::move(c)) {}
};

// Immutable finite assignment of nodes to identifiers.  Construction
// validates the closed-world invariant: every node id referenced by a map
// destination or overlay is a key.  With allow_dangling, missing referenced
// ids are materialized as empty nodes instead.
class net {
  public:
    net() = default;

    static net from_nodes(std::map<node_id, node> nodes, bool allow_dangling = false) {
        std::vector<node_id> missing;
        for (const auto& [nd, desc] : nodes) {
            (void)nd;
            for (const auto& entry : desc.maps) {
                if (entry.src.base > entry.src.limit)
                    throw invalid_block_error(entry.src);
                for (const auto& d : entry.dests)
                    if (!nodes.count(d.node))
                        missing.push_back(d.node);
            }
            for (const auto& b : desc.accept)
                if (b.base > b.limit)
                    throw invalid_block_error(b);
            if (desc.overlay && !nodes.count(*desc.overlay))
                missing.push_back(*desc.overlay);
        }
        if (!missing.empty()) {
            if (!allow_dangling) {
                std::sort(missing.begin(), missing.end());
                missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
                throw dangling_node_error(std::move(missing));
            }
            for (node_id nd : missing)
                nodes.emplace(nd, node{});
        }
        net result;
        result.nodes_ = std::move(nodes);
        return result;
    }

    bool contains(node_id nd) const { return nodes_.count(nd) != 0; }

    const node& at(node_id nd) const {
        auto it = nodes_.find(nd);
        if (it == nodes_.end())
            throw unknown_node_error(nd);
        return it->second;
    }

    const std::map<node_id, node>& nodes() const { return nodes_; }

    std::set<node_id> node_ids() const {
        std::set<node_id> ids;
        for (const auto& [nd, desc] : nodes_) {
            (void)desc;
            ids.insert(nd);
        }
        return ids;
    }

    node_id max_id() const {
        return nodes_.empty() ? 0 : nodes_.rbegin()->first;
    }

  private:
    std::map<node_id, node> nodes_;
};

} // namespace dnet
