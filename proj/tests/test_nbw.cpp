#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <cmath>
#include <vector>

#include "percolab/nbw.hpp"

using namespace percolab;

TEST_CASE("krawtchouk small values and identities") {
    KrawtchoukTable k2(2);
    CHECK(k2(0, 0) == 1);
    CHECK(k2(1, 0) == 2);
    CHECK(k2(1, 1) == 0);
    CHECK(k2(1, 2) == -2);
    CHECK(k2(2, 0) == 1);
    CHECK(k2(2, 1) == -1);
    CHECK(k2(2, 2) == 1);

    KrawtchoukTable k10(10);
    for (std::uint32_t j = 0; j <= 10; ++j)
        CHECK(k10(j, 0) == KrawtchoukTable::binomial(10, j));
    for (std::uint32_t w = 0; w <= 10; ++w) {
        std::int64_t column = 0;
        for (std::uint32_t j = 0; j <= 10; ++j) column += k10(j, w);
        CHECK(column == (w == 0 ? 1024 : 0));
    }
}

TEST_CASE("krawtchouk orthogonality is exact up to m = 28") {
    for (std::uint32_t m : {2u, 5u, 12u, 20u, 28u}) {
        KrawtchoukTable kraw(m);
        for (std::uint32_t j = 0; j <= m; ++j)
            for (std::uint32_t jp = j; jp <= m; ++jp)
                REQUIRE(kraw.orthogonality_defect(j, jp) == 0);
    }
}

TEST_CASE("spectrum boundary rows") {
    NbwSpectrum spec(7, 30);
    for (std::uint32_t t = 0; t <= 30; ++t) CHECK(spec.coeff(t, 0) == Catch::Approx(1.0).margin(1e-12));
    for (std::uint32_t j = 0; j <= 7; ++j)
        CHECK(spec.coeff(1, j) == Catch::Approx(1.0 - 2.0 * j / 7).margin(1e-15));
    CHECK(spec.coeff(1, 7) == Catch::Approx(-1.0).margin(1e-15));
    CHECK_THROWS_AS(NbwSpectrum(1, 5), std::invalid_argument);
}

TEST_CASE("4-cycle walk is a deterministic rotation") {
    NbwSpectrum spec(2, 6);
    KrawtchoukTable kraw(2);
    CHECK(nbw_transition(spec, kraw, 2, 2) == Catch::Approx(1.0).margin(1e-14));
    CHECK(nbw_transition(spec, kraw, 2, 0) == Catch::Approx(0.0).margin(1e-14));
    CHECK(nbw_transition(spec, kraw, 2, 1) == Catch::Approx(0.0).margin(1e-14));
    // and it never uniformizes
    CHECK_THROWS_AS(
        [] {
            NbwSpectrum s(2, 8);
            KrawtchoukTable k(2);
            uniform_mixing_time(s, k, 0.5);
        }(),
        std::runtime_error);
}

TEST_CASE("no-return probabilities are exact") {
    for (std::uint32_t m = 3; m <= 20; ++m) {
        NbwSpectrum spec(m, 4);
        KrawtchoukTable kraw(m);
        CHECK(nbw_transition(spec, kraw, 0, 0) == 1.0);
        CHECK(std::abs(nbw_transition(spec, kraw, 2, 0)) < 1e-12);
        CHECK(nbw_transition(spec, kraw, 4, 0) ==
              Catch::Approx(1.0 / ((m - 1.0) * (m - 1.0))).margin(1e-12));
    }
}

TEST_CASE("recursion matches dense path enumeration") {
    for (std::uint32_t m : {2u, 3u, 4u}) {
        TransitiveGraph g(GraphSpec::hypercube(m));
        NbwSpectrum spec(m, 6);
        KrawtchoukTable kraw(m);
        for (std::uint32_t t = 0; t <= 6; ++t) {
            auto dense = nbw_exact_distribution(g, 0, t);
            for (Vertex z = 0; z < g.vertex_count(); ++z) {
                auto w = static_cast<std::uint32_t>(std::popcount(z));
                REQUIRE(std::abs(dense[z] - nbw_transition(spec, kraw, t, w)) < 1e-12);
            }
        }
    }
}

TEST_CASE("mass, parity and the coefficient bound") {
    for (std::uint32_t m : {3u, 8u, 14u}) {
        NbwSpectrum spec(m, 50);
        KrawtchoukTable kraw(m);
        double inv_sqrt = 1.0 / std::sqrt(m - 1.0);
        for (std::uint32_t t = 0; t <= 50; ++t) {
            double mass = 0;
            for (std::uint32_t w = 0; w <= m; ++w) {
                double value = nbw_transition(spec, kraw, t, w);
                mass += static_cast<double>(KrawtchoukTable::binomial(m, w)) * value;
                if ((t % 2) != (w % 2)) REQUIRE(value <= 1e-12);
            }
            REQUIRE(std::abs(mass - 1.0) <= 1e-9);
            if (t >= 1)
                for (std::uint32_t j = 0; j <= m; ++j) {
                    double cap = std::pow(std::max(std::abs(1.0 - 2.0 * j / m), inv_sqrt),
                                          static_cast<double>(t) - 1.0);
                    REQUIRE(std::abs(spec.coeff(t, j)) <= cap * (1 + 1e-9));
                }
        }
    }
}

TEST_CASE("mixing time is monotone in xi and deterministic") {
    NbwSpectrum spec(10, 16);
    KrawtchoukTable kraw(10);
    auto t_small = uniform_mixing_time(spec, kraw, 0.05);
    auto t_large = uniform_mixing_time(spec, kraw, 0.5);
    CHECK(t_small >= t_large);
    NbwSpectrum again(10, 16);
    CHECK(uniform_mixing_time(again, kraw, 0.05) == t_small);
    CHECK_THROWS_AS(uniform_mixing_time(spec, kraw, 0.0), std::invalid_argument);
}

TEST_CASE("triangle sum: empty horizon and brute force at m = 4") {
    NbwSpectrum spec(4, 8);
    KrawtchoukTable kraw(4);
    CHECK(triangle_sum(spec, kraw, 0).total == 0.0);

    // brute force over the 16-vertex cube with dense kernels, L = 2
    TransitiveGraph g(GraphSpec::hypercube(4));
    std::vector<std::vector<double>> dist;
    for (std::uint32_t t = 0; t <= 2; ++t) dist.push_back(nbw_exact_distribution(g, 0, t));
    double brute = 0;
    for (std::uint32_t t1 = 0; t1 <= 2; ++t1)
        for (std::uint32_t t2 = 0; t2 <= 2; ++t2)
            for (std::uint32_t t3 = 0; t3 <= 2; ++t3) {
                if (t1 + t2 + t3 < 3) continue;
                for (Vertex u = 0; u < 16; ++u)
                    for (Vertex v = 0; v < 16; ++v)
                        brute += dist[t1][u] * dist[t2][u ^ v] * dist[t3][v];
            }
    auto tri = triangle_sum(spec, kraw, 2);
    CHECK(tri.total == Catch::Approx(brute).margin(1e-12));
    CHECK(tri.k01_bound == Catch::Approx(2.0 * 8 / 16).margin(1e-15));
}

TEST_CASE("condition report quantities") {
    // p exactly 1/(m-1) makes condition (2) vanish
    auto report = check_conditions(12, 1.0 / 11.0, std::log(12.0) / 12, 30);
    CHECK(report.condition2 == Catch::Approx(0.0).margin(1e-12));
    auto again = check_conditions(12, 1.0 / 11.0, std::log(12.0) / 12, 30);
    CHECK(report.condition3 == again.condition3);  // deterministic
    CHECK(report.triangle.total > 0);

    // the reference expansion point keeps [p (m-1)]^{m0} within the derived
    // envelope 5 m0 / m^2
    const std::uint32_t m = 16;
    NbwSpectrum spec(m, 16);
    KrawtchoukTable kraw(m);
    std::uint32_t m0 = uniform_mixing_time(spec, kraw, std::log(static_cast<double>(m)) / m);
    auto rep16 = check_conditions(m, TransitiveGraph::hypercube_pc_reference(m),
                                  std::log(static_cast<double>(m)) / m, m0);
    CHECK(std::abs(rep16.condition2) <= 5.0 * m0 / (m * m));
}

TEST_CASE("nbw trajectories never reverse and start uniformly") {
    TransitiveGraph g(GraphSpec::hypercube(6));
    CHECK(simulate_nbw(g, 5, 0, 1) == std::vector<Vertex>{5});
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto path = simulate_nbw(g, 0, 30, seed);
        REQUIRE(path.size() == 31);
        for (std::size_t t = 2; t < path.size(); ++t) {
            REQUIRE(path[t] != path[t - 2]);  // no immediate reversal
            REQUIRE(std::popcount(path[t] ^ path[t - 1]) == 1);
        }
    }
}

TEST_CASE("simulated endpoint distribution matches the spectrum", "[slow]") {
    const std::uint32_t m = 6, tmax = 8;
    const std::uint64_t walks = 60000;
    TransitiveGraph g(GraphSpec::hypercube(m));
    NbwSpectrum spec(m, tmax);
    KrawtchoukTable kraw(m);
    std::vector<std::vector<std::uint64_t>> counts(tmax + 1, std::vector<std::uint64_t>(m + 1));
    for (std::uint64_t wk = 0; wk < walks; ++wk) {
        auto path = simulate_nbw(g, 0, tmax, derive_seed(606, wk));
        for (std::uint32_t t = 0; t <= tmax; ++t)
            ++counts[t][std::popcount(path[t])];
    }
    for (std::uint32_t t = 1; t <= tmax; ++t)
        for (std::uint32_t w = 0; w <= m; ++w) {
            double expect = static_cast<double>(KrawtchoukTable::binomial(m, w)) *
                            nbw_transition(spec, kraw, t, w);
            double got = static_cast<double>(counts[t][w]) / walks;
            double se = std::sqrt(std::max(expect * (1 - expect), 1e-10) / walks);
            REQUIRE(std::abs(got - expect) <= 4 * se);
        }
}
