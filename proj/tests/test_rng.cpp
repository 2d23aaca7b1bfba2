#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "percolab/rng.hpp"

using namespace percolab;

TEST_CASE("edge values are pure functions of (seed, index)") {
    EdgeRandomness a(123), b(123), c(124);
    // evaluate in different orders; values must not depend on history
    double a5 = a.value(5);
    double a0 = a.value(0);
    CHECK(b.value(0) == a0);
    CHECK(b.value(5) == a5);
    CHECK(c.value(5) != a5);
}

TEST_CASE("edge values are uniform on [0,1)") {
    EdgeRandomness rnd(2024);
    const std::uint64_t n = 1 << 20;
    double sum = 0;
    std::uint64_t below = 0;
    const double p = 0.37;
    for (std::uint64_t i = 0; i < n; ++i) {
        double v = rnd.value(i);
        REQUIRE(v >= 0.0);
        REQUIRE(v < 1.0);
        sum += v;
        if (v < p) ++below;
    }
    double mean = sum / n;
    CHECK(std::abs(mean - 0.5) < 4.0 * std::sqrt(1.0 / 12 / n));
    double frac = static_cast<double>(below) / n;
    CHECK(std::abs(frac - p) < 4.0 * std::sqrt(p * (1 - p) / n));
}

TEST_CASE("coupling is monotone in p by construction") {
    EdgeRandomness rnd(7);
    for (std::uint64_t e = 0; e < 10000; ++e) {
        if (rnd.open(e, 0.2)) CHECK(rnd.open(e, 0.6));
    }
}

TEST_CASE("derived streams differ") {
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0, 5) != derive_seed(1, 1, 5));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("counter rng bounded draws") {
    CounterRng rng(99);
    std::vector<std::uint64_t> histogram(7, 0);
    for (int i = 0; i < 70000; ++i) {
        auto v = rng.next_below(7);
        REQUIRE(v < 7);
        ++histogram[v];
    }
    for (std::uint64_t count : histogram)
        CHECK(std::abs(static_cast<double>(count) - 10000.0) < 4 * std::sqrt(10000.0));
    CounterRng again(99);
    CHECK(again.next_u64() == CounterRng(99).next_u64());
}
