#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "percolab/sprinkling.hpp"

using namespace percolab;

TEST_CASE("plan algebra") {
    TransitiveGraph g(GraphSpec::hypercube(20));
    double pc = TransitiveGraph::hypercube_pc_reference(20);
    auto plan = sprinkle_plan(g, pc, 0.1, 0.1);
    CHECK(plan.p2 == Catch::Approx(0.1 * 0.1 / 20).margin(1e-18));
    CHECK(plan.p1 + (1 - plan.p1) * plan.p2 == Catch::Approx(plan.p).margin(1e-15));
    CHECK(plan.p1 > 0);
    CHECK(plan.p1 < plan.p);
    // k0 = ceil(eps^-2 (eps^3 V)^{1/4}) with eps = 0.1, V = 2^20
    CHECK(plan.k0 == 570);
}

TEST_CASE("theta to zero pushes p1 to p") {
    TransitiveGraph g(GraphSpec::hypercube(10));
    double pc = TransitiveGraph::hypercube_pc_reference(10);
    auto plan = sprinkle_plan(g, pc, 0.2, 1e-9);
    CHECK(plan.p1 == Catch::Approx(plan.p).margin(1e-10));
}

TEST_CASE("plan validation") {
    TransitiveGraph g(GraphSpec::hypercube(10));
    double pc = TransitiveGraph::hypercube_pc_reference(10);
    CHECK_THROWS_AS(sprinkle_plan(g, pc, 0.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(sprinkle_plan(g, pc, 1.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(sprinkle_plan(g, pc, 0.1, 0.34), std::invalid_argument);
    // a tiny critical point makes the second round dominate: rejected
    CHECK_THROWS_AS(sprinkle_plan(g, 1e-6, 0.5, 0.3), std::invalid_argument);
}

TEST_CASE("union layer dominates the first round") {
    TransitiveGraph g(GraphSpec::hypercube(12));
    double pc = TransitiveGraph::hypercube_pc_reference(12);
    auto plan = sprinkle_plan(g, pc, 0.3, 0.1);
    for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
        auto out = sprinkle_run(g, plan, seed);
        REQUIRE(out.c1_after >= out.c1_at_p1);
    }
}

TEST_CASE("degenerate second round leaves the first untouched") {
    TransitiveGraph g(GraphSpec::hypercube(10));
    double pc = TransitiveGraph::hypercube_pc_reference(10);
    auto plan = sprinkle_plan(g, pc, 0.25, 1e-12);  // p2 ~ 2.5e-15: no edges added
    auto out = sprinkle_run(g, plan, 77);
    CHECK(out.c1_after == out.c1_at_p1);
}

TEST_CASE("union edge density matches the target probability") {
    TransitiveGraph g(GraphSpec::hypercube(12));
    double pc = TransitiveGraph::hypercube_pc_reference(12);
    auto plan = sprinkle_plan(g, pc, 0.3, 0.1);
    double e = static_cast<double>(g.edge_count());
    for (std::uint64_t seed : {10, 11, 12}) {
        auto out = sprinkle_run(g, plan, seed);
        double z = (out.union_edge_density - plan.p) / std::sqrt(plan.p * (1 - plan.p) / e);
        CAPTURE(seed, out.union_edge_density, plan.p);
        REQUIRE(std::abs(z) <= 4.0);
    }
}

TEST_CASE("runs are deterministic per seed and plan") {
    TransitiveGraph g(GraphSpec::hypercube(10));
    auto plan = sprinkle_plan(g, TransitiveGraph::hypercube_pc_reference(10), 0.3, 0.05);
    auto a = sprinkle_run(g, plan, 123);
    auto b = sprinkle_run(g, plan, 123);
    CHECK(a.c1_after == b.c1_after);
    CHECK(a.z_at_p1 == b.z_at_p1);
    CHECK(a.boundary_closed_edges == b.boundary_closed_edges);
}

TEST_CASE("boundary experiment error paths") {
    TransitiveGraph g(GraphSpec::hypercube(6));
    // p1 = 1: a single cluster, nothing to partition
    SprinklePlan full;
    full.epsilon = 0.1;
    full.theta = 0.05;
    full.p = 1.0;
    full.p1 = 1.0;
    full.p2 = 0.0;
    full.k0 = 2;
    CHECK_THROWS_AS(boundary_experiment(g, full, 5), std::runtime_error);

    // p1 = 0 on a toy graph: no clusters reach k0 >= 2
    SprinklePlan empty = full;
    empty.p1 = 0.0;
    CHECK_THROWS_AS(boundary_experiment(TransitiveGraph(GraphSpec::hypercube(2)), empty, 5),
                    std::runtime_error);
}

TEST_CASE("boundary experiment partitions whole clusters and counts edges") {
    // Slightly subcritical first round: plenty of mid-size clusters, so the
    // greedy partition always has material on both sides.
    TransitiveGraph g(GraphSpec::hypercube(14));
    double pc = TransitiveGraph::hypercube_pc_reference(14);
    auto plan = sprinkle_plan(g, pc, 0.1, 0.1);
    plan.p1 = pc * 0.95;
    plan.k0 = 30;
    auto out = boundary_experiment(g, plan, 99);
    CHECK(out.side_a_vertices > 0);
    CHECK(out.side_b_vertices > 0);
    CHECK(out.closed_edges > 0);
    CHECK(out.ratio > 0.005);
    CHECK(out.ratio < 10.0);
}

TEST_CASE("partition halves share edges like uniform random sets", "[slow]") {
    // Near-critical first round: many qualifying clusters, so the greedy
    // partition is genuinely balanced and the closed-edge count can be
    // compared against the uniform-random-set prediction m |A||B| (1-p1) / V.
    TransitiveGraph g(GraphSpec::hypercube(16));
    double pc = TransitiveGraph::hypercube_pc_reference(16);
    auto plan = sprinkle_plan(g, pc, 0.1, 0.1);
    plan.p1 = pc;
    plan.k0 = 40;
    double v = static_cast<double>(g.vertex_count());
    for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
        auto out = boundary_experiment(g, plan, seed);
        double a = static_cast<double>(out.side_a_vertices);
        double b = static_cast<double>(out.side_b_vertices);
        REQUIRE(std::min(a, b) > 0.25 * (a + b));  // greedy balance worked
        double predicted = g.degree() * a * b * (1 - plan.p1) / v;
        double agreement = static_cast<double>(out.closed_edges) / predicted;
        CAPTURE(seed, agreement);
        REQUIRE(agreement > 0.5);
        REQUIRE(agreement < 2.0);
    }
}
