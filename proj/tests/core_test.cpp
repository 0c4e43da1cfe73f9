#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace dnet;
using support::blk;
using support::net_builder;

TEST_CASE("decode_step translates through a single affine map") {
    net nt = net_builder{}
                 .map(0, blk(0x1000, 0x1fff), 1, addr(0x0))
                 .empty_node(1)
                 .build();
    CHECK(decode_step(nt, name{0, addr(0x1010)}) ==
          std::set<name>{name{1, addr(0x10)}});
    CHECK(decode_step(nt, name{0, addr(0x2000)}).empty());
}

TEST_CASE("decode_step forwards through overlays one to one") {
    net nt = net_builder{}.over(0, 1).accept(1, blk(0, 0)).build();
    CHECK(decode_step(nt, name{0, addr(5)}) == std::set<name>{name{1, addr(5)}});
}

TEST_CASE("overlay successors are not masked by accept or map coverage") {
    net nt = net_builder{}
                 .accept(0, blk(0, 10))
                 .map(0, blk(0, 10), 1, addr(0))
                 .over(0, 2)
                 .empty_node(1)
                 .empty_node(2)
                 .build();
    CHECK(decode_step(nt, name{0, addr(5)}) ==
          std::set<name>{name{1, addr(5)}, name{2, addr(5)}});
}

TEST_CASE("decode_step rejects unknown nodes") {
    net nt = net_builder{}.empty_node(0).build();
    CHECK_THROWS_AS(decode_step(nt, name{7, addr(0)}), unknown_node_error);
    CHECK_THROWS_AS(accepted_contains(nt, name{7, addr(0)}), unknown_node_error);
}

TEST_CASE("accepted_contains checks the accept blocks only") {
    net nt = net_builder{}.accept(0, blk(0x10, 0x1f)).empty_node(1).build();
    CHECK(accepted_contains(nt, name{0, addr(0x10)}));
    CHECK(accepted_contains(nt, name{0, addr(0x1f)}));
    CHECK_FALSE(accepted_contains(nt, name{0, addr(0xf)}));
    CHECK_FALSE(accepted_contains(nt, name{1, addr(0x10)}));
}

TEST_CASE("resolve returns the accepted closure") {
    net nt = net_builder{}.over(0, 1).accept(1, blk(0, 0xff)).build();
    CHECK(resolve(nt, name{0, addr(5)}) == std::set<name>{name{1, addr(5)}});
    // accepting intermediate names stay in the result
    net both = net_builder{}
                   .accept(0, blk(0, 10))
                   .map(0, blk(0, 10), 1, addr(100))
                   .accept(1, blk(100, 110))
                   .build();
    CHECK(resolve(both, name{0, addr(3)}) ==
          std::set<name>{name{0, addr(3)}, name{1, addr(103)}});
}

TEST_CASE("resolve reports the identity self-map as a loop with a witness") {
    net nt = net_builder{}.map(0, blk(0, 10), 0, addr(0)).build();
    try {
        resolve(nt, name{0, addr(5)});
        FAIL("expected loop_error");
    } catch (const loop_error& e) {
        REQUIRE(e.cycle.size() == 2);
        CHECK(e.cycle.front() == name{0, addr(5)});
        CHECK(e.cycle.back() == name{0, addr(5)});
    }
}

TEST_CASE("resolve is deterministic across repeated calls") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 50; ++i) {
        net nt = support::random_net(rng);
        for (const auto& [nd, desc] : nt.nodes()) {
            (void)desc;
            name n{nd, addr(7)};
            try {
                auto a = resolve(nt, n);
                auto b = resolve(nt, n);
                CHECK(a == b);
            } catch (const loop_error&) {
                CHECK_THROWS_AS(resolve(nt, n), loop_error);
            }
        }
    }
}

TEST_CASE("is_in_domain rejects the two-node overlay cycle") {
    net nt = net_builder{}.over(0, 1).over(1, 0).build();
    CHECK_FALSE(is_in_domain(nt, name{0, addr(7)}));
}

TEST_CASE("shifting self-maps escape their source block") {
    // oracle: unroll the +1 shift until the address exits [0, 100]
    net nt = net_builder{}.map(0, blk(0, 100), 0, addr(1)).build();
    name n{0, addr(0)};
    std::size_t steps = 0;
    name cur = n;
    while (!decode_step(nt, cur).empty()) {
        cur = *decode_step(nt, cur).begin();
        steps++;
        REQUIRE(steps <= 200);
    }
    CHECK(steps == 101);
    CHECK(is_in_domain(nt, n));
    CHECK(reachable_names(nt, n).size() == 102);
}

TEST_CASE("is_in_domain agrees with resolve loop reporting") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 100; ++i) {
        net nt = support::random_net(rng);
        for (const auto& [nd, desc] : nt.nodes()) {
            (void)desc;
            for (unsigned long a : {0ul, 5ul, 23ul}) {
                name n{nd, addr(a)};
                bool dom = is_in_domain(nt, n);
                bool resolved = true;
                try {
                    resolve(nt, n);
                } catch (const loop_error&) {
                    resolved = false;
                }
                CHECK(dom == resolved);
            }
        }
    }
}

TEST_CASE("compute_ranking ranks a two-step chain") {
    net nt = net_builder{}.over(0, 1).accept(1, blk(0, 0xff)).build();
    ranking r = compute_ranking(nt, name{0, addr(5)});
    CHECK(r.ranks.at(name{1, addr(5)}) == 0);
    CHECK(r.ranks.at(name{0, addr(5)}) == 1);
    CHECK(wf_rank(nt, r, name{0, addr(5)}));
}

TEST_CASE("accepted leaves rank zero") {
    net nt = net_builder{}.accept(0, blk(0, 10)).build();
    ranking r = compute_ranking(nt, name{0, addr(3)});
    CHECK(r.ranks.at(name{0, addr(3)}) == 0);
}

TEST_CASE("compute_ranking fails outside the domain") {
    net nt = net_builder{}.map(0, blk(0, 10), 0, addr(0)).build();
    CHECK_THROWS_AS(compute_ranking(nt, name{0, addr(5)}), loop_error);
}

TEST_CASE("ranking exists iff in domain, and is well-formed") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
        net nt = support::random_net(rng);
        for (const auto& [nd, desc] : nt.nodes()) {
            (void)desc;
            name n{nd, addr(11)};
            bool dom = is_in_domain(nt, n);
            try {
                ranking r = compute_ranking(nt, n);
                CHECK(dom);
                CHECK(wf_rank(nt, r, n));
            } catch (const loop_error&) {
                CHECK_FALSE(dom);
            }
        }
    }
}

TEST_CASE("reachable_names returns the reflexive transitive image") {
    net nt = net_builder{}.over(0, 1).accept(1, blk(0, 0xff)).build();
    CHECK(reachable_names(nt, name{0, addr(5)}) ==
          std::set<name>{name{0, addr(5)}, name{1, addr(5)}});
}

TEST_CASE("resolve equals accepted names within the reachable set") {
    std::mt19937_64 rng(31337);
    for (int i = 0; i < 100; ++i) {
        net nt = support::random_net(rng);
        for (const auto& [nd, desc] : nt.nodes()) {
            (void)desc;
            for (unsigned long a : {0ul, 7ul, 48ul}) {
                name n{nd, addr(a)};
                if (!is_in_domain(nt, n))
                    continue;
                std::set<name> expected;
                for (const name& m : reachable_names(nt, n))
                    if (accepted_contains(nt, m))
                        expected.insert(m);
                CHECK(resolve(nt, n) == expected);
            }
        }
    }
}

TEST_CASE("decode_step branching is bounded by covering destinations") {
    std::mt19937_64 rng(4242);
    for (int i = 0; i < 100; ++i) {
        net nt = support::random_net(rng);
        for (const auto& [nd, desc] : nt.nodes()) {
            for (unsigned long a : {0ul, 3ul, 17ul, 50ul}) {
                std::size_t covering = 0;
                for (const auto& entry : desc.maps)
                    if (entry.src.contains(addr(a)))
                        covering += entry.dests.size();
                std::size_t bound = covering + (desc.overlay ? 1 : 0);
                CHECK(decode_step(nt, name{nd, addr(a)}).size() <= bound);
            }
        }
    }
}

TEST_CASE("map translation is exact affine arithmetic") {
    std::mt19937_64 rng(555);
    for (int i = 0; i < 100; ++i) {
        net nt = support::random_net(rng);
        for (const auto& [nd, desc] : nt.nodes()) {
            for (const auto& entry : desc.maps) {
                for (const addr& a : {entry.src.base, entry.src.limit}) {
                    std::set<name> step = decode_step(nt, name{nd, a});
                    for (const auto& d : entry.dests) {
                        name expect{d.node, d.base + (a - entry.src.base)};
                        CHECK(step.count(expect) == 1);
                    }
                    for (const auto& d : entry.dests)
                        if (a == entry.src.base)
                            CHECK(step.count(name{d.node, d.base}) == 1);
                }
            }
        }
    }
}

TEST_CASE("view_from resolves pointwise and flags the failing address") {
    net nt = net_builder{}.over(0, 1).accept(1, blk(0, 0xff)).build();
    auto view = view_from(nt, 0, {addr(1), addr(2)});
    CHECK(view.size() == 2);
    CHECK(view.at(addr(1)) == std::set<name>{name{1, addr(1)}});

    CHECK(view_from(nt, 0, {}).empty());

    net loop = net_builder{}.map(0, blk(4, 4), 0, addr(4)).build();
    try {
        view_from(loop, 0, {addr(4)});
        FAIL("expected loop_error");
    } catch (const loop_error& e) {
        CHECK(e.start == name{0, addr(4)});
    }
}

TEST_CASE("net validation enforces the closed world") {
    std::map<node_id, node> nodes;
    nodes[0].maps.push_back(support::one_map(blk(0, 1), 9, addr(0)));
    CHECK_THROWS_AS(net::from_nodes(nodes), dangling_node_error);

    net relaxed = net::from_nodes(nodes, true);
    CHECK(relaxed.contains(9));
    CHECK(relaxed.at(9).empty());
    CHECK(resolve(relaxed, name{0, addr(0)}).empty());
}

TEST_CASE("net validation rejects inverted blocks") {
    std::map<node_id, node> nodes;
    nodes[0].accept.push_back(block{addr(10), addr(3)});
    CHECK_THROWS_AS(net::from_nodes(nodes), invalid_block_error);
}
