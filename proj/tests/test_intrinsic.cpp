#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <vector>

#include "percolab/estimators.hpp"
#include "percolab/intrinsic.hpp"
#include "percolab/percolation.hpp"

using namespace percolab;

TEST_CASE("radius zero ball") {
    TransitiveGraph g(GraphSpec::hypercube(4));
    auto b = ball(g, EdgeRandomness(1), 0.5, 6, 0);
    CHECK(b.total == 1);
    CHECK(b.shell_sizes == std::vector<std::uint64_t>{1});
    CHECK(b.survived);
}

TEST_CASE("full ball at p = 1") {
    TransitiveGraph g(GraphSpec::hypercube(3));
    auto b = ball(g, EdgeRandomness(1), 1.0, 0, 1);
    CHECK(b.total == 4);  // center plus 3 neighbors
    CHECK(b.shell_sizes == std::vector<std::uint64_t>{1, 3});
}

TEST_CASE("empty forbidden set changes nothing") {
    TransitiveGraph g(GraphSpec::hypercube(6));
    EdgeRandomness rnd(17);
    VertexBitset empty(g.vertex_count());
    auto plain = ball(g, rnd, 0.3, 0, 5);
    auto off_empty = ball(g, rnd, 0.3, 0, 5, &empty);
    CHECK(plain.shell_sizes == off_empty.shell_sizes);
    CHECK(plain.total == off_empty.total);
}

TEST_CASE("forbidden vertices never enter the ball") {
    TransitiveGraph g(GraphSpec::hypercube(6));
    EdgeRandomness rnd(23);
    VertexBitset forbidden(g.vertex_count());
    for (Vertex v : {1, 5, 9, 33}) forbidden.set(v);
    auto b = ball(g, rnd, 0.6, 0, 6, &forbidden, true);
    for (Vertex v : b.members) CHECK(!forbidden.test(v));
    CHECK_THROWS_AS(ball(g, rnd, 0.6, 1, 3, &forbidden), std::invalid_argument);
}

TEST_CASE("balls nest and shells are consistent across radii") {
    TransitiveGraph g(GraphSpec::hypercube(8));
    EdgeRandomness rnd(3);
    auto b5 = ball(g, rnd, 0.15, 0, 5);
    auto b8 = ball(g, rnd, 0.15, 0, 8);
    for (std::uint32_t t = 0; t <= 5; ++t) REQUIRE(b5.shell_sizes[t] == b8.shell_sizes[t]);
    CHECK(b8.total >= b5.total);
}

TEST_CASE("ball with radius V recovers the whole cluster") {
    for (const auto& spec : {GraphSpec::hypercube(8), GraphSpec::torus(4, 3)}) {
        CAPTURE(spec.to_string());
        TransitiveGraph g(spec);
        EdgeRandomness rnd(12);
        for (double p : {0.1, 0.4}) {
            auto b = ball(g, rnd, p, 0, static_cast<std::uint32_t>(g.vertex_count()), nullptr,
                          true);
            std::vector<Vertex> members;
            cluster_of(g, rnd, p, 0, 0, &members);
            std::sort(b.members.begin(), b.members.end());
            std::sort(members.begin(), members.end());
            REQUIRE(b.members == members);
        }
    }
}

TEST_CASE("intrinsic distance dominates the hypercube metric") {
    TransitiveGraph g(GraphSpec::hypercube(8));
    EdgeRandomness rnd(5);
    auto b = ball(g, rnd, 0.2, 0, 10, nullptr, true);
    std::vector<Vertex> frontier{0}, next;
    // recompute shells to pair members with distances
    VertexBitset seen(g.vertex_count());
    seen.set(0);
    std::uint32_t depth = 0;
    while (!frontier.empty() && depth < 10) {
        ++depth;
        next.clear();
        for (Vertex v : frontier)
            g.for_each_neighbor(v, [&](Vertex u, EdgeIndex e) {
                if (!seen.test(u) && rnd.open(e, 0.2)) {
                    seen.set(u);
                    next.push_back(u);
                    REQUIRE(static_cast<std::uint32_t>(std::popcount(u)) <= depth);
                }
            });
        frontier.swap(next);
    }
}

TEST_CASE("survival events at the endpoints") {
    TransitiveGraph g(GraphSpec::hypercube(5));
    CHECK_FALSE(survival_event(g, EdgeRandomness(2), 0.0, 0, 1));
    for (std::uint32_t r = 1; r <= 5; ++r)
        CHECK(survival_event(g, EdgeRandomness(2), 1.0, 0, r));
    CHECK_FALSE(survival_event(g, EdgeRandomness(2), 1.0, 0, 6));  // beyond the diameter
}

TEST_CASE("disjoint survival basics") {
    TransitiveGraph g(GraphSpec::hypercube(5));
    EdgeRandomness rnd(8);
    CHECK_FALSE(disjoint_survival(g, rnd, 0.0, 0, 31, 1, 1));
    CHECK_FALSE(disjoint_survival(g, rnd, 1.0, 0, 1, 1, 1));  // adjacent balls intersect
    CHECK(disjoint_survival(g, rnd, 1.0, 0, 31, 1, 1));       // antipodal balls of radius 1
    CHECK_THROWS_AS(disjoint_survival(g, rnd, 0.5, 3, 3, 1, 1), std::invalid_argument);
}

TEST_CASE("ball radius cap") {
    TransitiveGraph g(GraphSpec::hypercube(3));
    CHECK_THROWS_AS(ball(g, EdgeRandomness(1), 0.5, 0, (1u << 16) + 1), std::invalid_argument);
}

// Supercritical ball growth at the reference point: E|B(r)| tracks
// eps^-1 (1+eps)^r within a constant band over the predicted radius range.
TEST_CASE("supercritical ball volume growth band", "[slow]") {
    const std::uint32_t m = 16;
    const double eps = 0.1;
    TransitiveGraph g(GraphSpec::hypercube(m));
    const double p = TransitiveGraph::hypercube_pc_reference(m) * (1 + eps);
    auto rep = ball_volumes(g, p, 40, 600, 2025, 2);
    for (std::uint32_t r : {20u, 30u, 40u}) {
        double predicted = std::pow(1 + eps, r) / eps;
        double ratio = rep.cumulative[r].mean / predicted;
        CAPTURE(r, ratio);
        CHECK(ratio > 0.15);
        CHECK(ratio < 6.0);
    }
}

// One-arm decay at the reference critical point: r P(survival to r) stays
// bounded as r grows.
TEST_CASE("critical survival probability decays like 1/r", "[slow]") {
    const std::uint32_t m = 16;
    TransitiveGraph g(GraphSpec::hypercube(m));
    const double p = TransitiveGraph::hypercube_pc_reference(m);
    for (std::uint32_t r : {4u, 8u, 16u, 32u}) {
        auto rep = survival_probability(g, p, r, 3000, 555, 2);
        CAPTURE(r, rep.mean);
        CHECK(r * rep.mean <= 4.0);
    }
}

// Disjoint-survival probability approaches 4 eps^2 for typical far-apart
// pairs once both radii pass the correlation length.
TEST_CASE("disjoint survival frequency near 4 eps^2", "[slow]") {
    const std::uint32_t m = 20;
    const double eps = 0.1;
    TransitiveGraph g(GraphSpec::hypercube(m));
    const double p = TransitiveGraph::hypercube_pc_reference(m) * (1 + eps);
    const std::uint32_t j = 20;  // 2 / eps
    const std::uint64_t pairs = 2000;
    CounterRng picker(31337);
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < pairs; ++i) {
        Vertex x = picker.next_below(g.vertex_count());
        Vertex y = picker.next_below(g.vertex_count());
        while (y == x) y = picker.next_below(g.vertex_count());
        EdgeRandomness rnd(derive_seed(808, i));
        if (disjoint_survival(g, rnd, p, x, y, j, j)) ++hits;
    }
    double freq = static_cast<double>(hits) / pairs;
    double target = 4 * eps * eps;
    CAPTURE(freq);
    CHECK(freq >= target * 0.7);
    CHECK(freq <= target * 1.3);
}
