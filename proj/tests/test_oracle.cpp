#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <vector>

#include "percolab/oracle.hpp"

using namespace percolab;

TEST_CASE("oracle on the 4-cycle") {
    TransitiveGraph g(GraphSpec::hypercube(2));
    SmallGraphOracle oracle(g);

    // direct edge or the complementary 3-path: p + (1-p) p^3
    CHECK(oracle.connection_probability(0.5, 0, 1) ==
          Catch::Approx(0.5 + 0.5 * 0.125).margin(1e-14));
    // two disjoint 2-paths: 2 p^2 - p^4
    CHECK(oracle.connection_probability(0.5, 0, 3) == Catch::Approx(7.0 / 16).margin(1e-14));
    // chi = 1 + 2 P(0<->1) + P(0<->3)
    CHECK(oracle.chi(0.5) == Catch::Approx(1 + 2 * 0.5625 + 0.4375).margin(1e-14));

    auto law = oracle.cluster_law(0.0);
    CHECK(law[1] == Catch::Approx(1.0).margin(1e-14));
    auto law_full = oracle.cluster_law(1.0);
    CHECK(law_full[4] == Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("cluster law is a probability distribution") {
    for (const auto& spec : {GraphSpec::hypercube(3), GraphSpec::complete(4),
                             GraphSpec::torus(5, 1)}) {
        TransitiveGraph g(spec);
        SmallGraphOracle oracle(g);
        for (double p : {0.15, 0.5, 0.85}) {
            auto law = oracle.cluster_law(p);
            double total = std::accumulate(law.begin(), law.end(), 0.0);
            REQUIRE(total == Catch::Approx(1.0).margin(1e-12));
        }
    }
}

TEST_CASE("magnetization boundary values and monotonicity") {
    TransitiveGraph g(GraphSpec::hypercube(3));
    SmallGraphOracle oracle(g);
    for (double p : {0.2, 0.6}) {
        CHECK(oracle.magnetization(p, 0.0) == 0.0);
        CHECK(oracle.magnetization(p, 1.0) == Catch::Approx(1.0).margin(1e-14));
        double last = 0;
        for (double gamma = 0.1; gamma < 1.0; gamma += 0.1) {
            double m = oracle.magnetization(p, gamma);
            REQUIRE(m >= last);
            last = m;
        }
    }
    // monotone in p as well
    double prev = 0;
    for (double p = 0.1; p < 1.0; p += 0.1) {
        double m = oracle.magnetization(p, 0.3);
        REQUIRE(m >= prev);
        prev = m;
    }
}

TEST_CASE("triangle diagram at p = 0") {
    TransitiveGraph g(GraphSpec::hypercube(3));
    SmallGraphOracle oracle(g);
    CHECK(oracle.nabla(0.0, 0, 0) == Catch::Approx(1.0).margin(1e-14));
    CHECK(oracle.nabla(0.0, 0, 5) == Catch::Approx(0.0).margin(1e-14));
    CHECK(oracle.nabla_max(0.0) == Catch::Approx(0.0).margin(1e-14));
    CHECK(oracle.nabla_max(0.4) > 0.0);
}

TEST_CASE("edge-count refusal") {
    CHECK_THROWS_AS(SmallGraphOracle(TransitiveGraph(GraphSpec::hypercube(5))),
                    std::invalid_argument);
    CHECK_THROWS_AS(SmallGraphOracle(TransitiveGraph(GraphSpec::torus(23, 1))),
                    std::invalid_argument);
    CHECK_NOTHROW(SmallGraphOracle(TransitiveGraph(GraphSpec::torus(22, 1))));
}

TEST_CASE("differential inequalities hold on the exact oracle") {
    std::vector<double> grid = {0.1, 0.5, 0.9};
    for (std::uint32_t m : {2u, 3u}) {
        TransitiveGraph g(GraphSpec::hypercube(m));
        SmallGraphOracle oracle(g);
        auto points = check_differential_inequalities(oracle, g.degree(), grid, grid);
        REQUIRE(points.size() == 9);
        for (const auto& pt : points) {
            CAPTURE(m, pt.p, pt.gamma);
            REQUIRE(pt.slack1 >= -1e-8);
            REQUIRE(pt.slack2 >= -1e-8);
            REQUIRE(pt.slack3 >= -1e-8);
            REQUIRE(pt.fd_residual <= 1e-6);
        }
    }
}

TEST_CASE("differential inequality checks are deterministic") {
    TransitiveGraph g(GraphSpec::hypercube(2));
    SmallGraphOracle oracle(g);
    auto a = check_differential_inequalities(oracle, 2, {0.3}, {0.4});
    auto b = check_differential_inequalities(oracle, 2, {0.3}, {0.4});
    CHECK(a[0].slack1 == b[0].slack1);
    CHECK(a[0].slack2 == b[0].slack2);
    CHECK(a[0].slack3 == b[0].slack3);
}

TEST_CASE("first inequality degenerates at gamma near 1") {
    // M is pinned at 1 when everything is green, so dM/dp collapses
    TransitiveGraph g(GraphSpec::hypercube(2));
    SmallGraphOracle oracle(g);
    auto points = check_differential_inequalities(oracle, 2, {0.5}, {0.999});
    REQUIRE(points.size() == 1);
    CHECK(std::abs(points[0].dM_dp) < 0.05);
    CHECK(points[0].slack1 >= -1e-8);
}

TEST_CASE("grid must be interior") {
    TransitiveGraph g(GraphSpec::hypercube(2));
    SmallGraphOracle oracle(g);
    CHECK_THROWS_AS(check_differential_inequalities(oracle, 2, {0.0}, {0.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(check_differential_inequalities(oracle, 2, {0.5}, {1.0}),
                    std::invalid_argument);
}
