#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "percolab/graph.hpp"
#include "percolab/percolation.hpp"

using namespace percolab;

TEST_CASE("family counts and degrees") {
    TransitiveGraph q3(GraphSpec::hypercube(3));
    CHECK(q3.vertex_count() == 8);
    CHECK(q3.degree() == 3);
    CHECK(q3.edge_count() == 12);

    TransitiveGraph hamming(GraphSpec::hamming(5, 2));
    CHECK(hamming.vertex_count() == 25);
    CHECK(hamming.degree() == 8);
    CHECK(hamming.edge_count() == 25 * 8 / 2);

    TransitiveGraph torus(GraphSpec::torus(5, 6));
    CHECK(torus.vertex_count() == 15625);
    CHECK(torus.degree() == 12);

    TransitiveGraph complete(GraphSpec::complete(4));
    CHECK(complete.vertex_count() == 4);
    CHECK(complete.degree() == 3);
    CHECK(complete.edge_count() == 6);
}

TEST_CASE("named neighbor examples") {
    TransitiveGraph q3(GraphSpec::hypercube(3));
    CHECK(q3.neighbors(0) == std::vector<Vertex>{1, 2, 4});

    TransitiveGraph q2(GraphSpec::hypercube(2));
    auto n3 = q2.neighbors(3);
    std::sort(n3.begin(), n3.end());
    CHECK(n3 == std::vector<Vertex>{1, 2});

    TransitiveGraph k4(GraphSpec::complete(4));
    CHECK(k4.neighbors(0) == std::vector<Vertex>{1, 2, 3});

    TransitiveGraph cycle(GraphSpec::torus(4, 1));
    auto n0 = cycle.neighbors(0);
    std::sort(n0.begin(), n0.end());
    CHECK(n0 == std::vector<Vertex>{1, 3});
}

static void check_adjacency(const TransitiveGraph& g) {
    std::map<Vertex, std::set<Vertex>> adj;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        auto nbrs = g.neighbors(v);
        std::set<Vertex> uniq(nbrs.begin(), nbrs.end());
        REQUIRE(nbrs.size() == g.degree());
        REQUIRE(uniq.size() == g.degree());      // no repeats
        REQUIRE(uniq.count(v) == 0);             // no self loop
        adj[v] = std::move(uniq);
    }
    for (const auto& [v, nbrs] : adj)
        for (Vertex u : nbrs) REQUIRE(adj[u].count(v) == 1);  // symmetry
}

TEST_CASE("adjacency is regular and symmetric") {
    for (const auto& spec :
         {GraphSpec::hypercube(6), GraphSpec::hamming(4, 3), GraphSpec::hamming(3, 2),
          GraphSpec::torus(3, 4), GraphSpec::torus(7, 2), GraphSpec::complete(17),
          GraphSpec::random_regular(40, 5, 3)}) {
        CAPTURE(spec.to_string());
        check_adjacency(TransitiveGraph(spec));
    }
}

TEST_CASE("edge index is a bijection onto [0, E)") {
    for (const auto& spec :
         {GraphSpec::hypercube(8), GraphSpec::hamming(4, 3), GraphSpec::torus(5, 3),
          GraphSpec::complete(30), GraphSpec::random_regular(64, 4, 11)}) {
        CAPTURE(spec.to_string());
        TransitiveGraph g(spec);
        std::vector<std::uint8_t> seen(g.edge_count(), 0);
        std::uint64_t count = 0;
        g.for_each_edge([&](EdgeIndex idx, Vertex u, Vertex v) {
            REQUIRE(idx < g.edge_count());
            REQUIRE(!seen[idx]);
            seen[idx] = 1;
            ++count;
            // both endpoints must agree on the canonical index
            REQUIRE(g.edge_index_between(u, v) == idx);
            REQUIRE(g.edge_index_between(v, u) == idx);
        });
        REQUIRE(count == g.edge_count());
    }
}

TEST_CASE("hypercube graph distance equals BFS distance at p = 1") {
    for (std::uint32_t m : {3u, 6u, 10u}) {
        TransitiveGraph g(GraphSpec::hypercube(m));
        EdgeRandomness rnd(1);
        std::vector<std::uint32_t> dist(g.vertex_count(), UINT32_MAX);
        std::vector<Vertex> frontier{0}, next;
        dist[0] = 0;
        std::uint32_t level = 0;
        while (!frontier.empty()) {
            ++level;
            next.clear();
            for (Vertex v : frontier)
                g.for_each_neighbor(v, [&](Vertex u, EdgeIndex) {
                    if (dist[u] == UINT32_MAX) {
                        dist[u] = level;
                        next.push_back(u);
                    }
                });
            frontier.swap(next);
        }
        for (Vertex y = 0; y < g.vertex_count(); ++y)
            REQUIRE(dist[y] == *g.graph_distance(0, y));
    }
}

TEST_CASE("random regular generation is deterministic and simple") {
    TransitiveGraph a(GraphSpec::random_regular(128, 6, 42));
    TransitiveGraph b(GraphSpec::random_regular(128, 6, 42));
    TransitiveGraph c(GraphSpec::random_regular(128, 6, 43));
    bool same = true, differs = false;
    for (Vertex v = 0; v < 128; ++v) {
        if (a.neighbors(v) != b.neighbors(v)) same = false;
        if (a.neighbors(v) != c.neighbors(v)) differs = true;
    }
    CHECK(same);
    CHECK(differs);
    check_adjacency(a);
}

TEST_CASE("construction errors") {
    CHECK_THROWS_AS(TransitiveGraph(GraphSpec::torus(2, 3)), std::invalid_argument);
    CHECK_THROWS_AS(TransitiveGraph(GraphSpec::random_regular(10, 10, 1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(TransitiveGraph(GraphSpec::random_regular(9, 3, 1)),
                    std::invalid_argument);  // odd stub count
    CHECK_THROWS_AS(TransitiveGraph(GraphSpec::hypercube(29)), std::invalid_argument);
    CHECK_THROWS_AS(TransitiveGraph(GraphSpec::hypercube(0)), std::invalid_argument);
}

TEST_CASE("spec strings round-trip") {
    for (const char* text : {"hypercube:m=20", "hamming:n=10,d=3", "torus:n=5,d=6",
                             "complete:n=100000", "regular:n=65536,m=24,seed=7"}) {
        CHECK(GraphSpec::parse(text).to_string() == text);
    }
    CHECK_THROWS_AS(GraphSpec::parse("hypercube"), std::invalid_argument);
    CHECK_THROWS_AS(GraphSpec::parse("hypercube:q=3"), std::invalid_argument);
    CHECK_THROWS_AS(GraphSpec::parse("blob:n=3"), std::invalid_argument);
    CHECK_THROWS_AS(GraphSpec::parse("hamming:n=4"), std::invalid_argument);
    CHECK_THROWS_AS(GraphSpec::parse("torus:n=x,d=2"), std::invalid_argument);
}

TEST_CASE("out-of-range vertex is rejected") {
    TransitiveGraph g(GraphSpec::hypercube(3));
    CHECK_THROWS_AS(g.neighbors(8), std::invalid_argument);
}

TEST_CASE("hypercube reference critical point") {
    CHECK(TransitiveGraph::hypercube_pc_reference(20) ==
          Catch::Approx(1.0 / 19 + 3.5 / 8000.0).epsilon(1e-15));
    CHECK_THROWS_AS(TransitiveGraph::hypercube_pc_reference(1), std::invalid_argument);
}
