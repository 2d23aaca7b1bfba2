#pragma once

#include <cstdint>

namespace percolab {

// 64-bit finalizer (splitmix64). Stateless: every random quantity in this
// library is a pure function of (seed, counter), so results never depend on
// call order or thread scheduling.
inline constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derive an independent stream key from a parent key and a word (replicate
// index, layer index, subcommand tag, ...).
inline constexpr std::uint64_t derive_seed(std::uint64_t key, std::uint64_t word) noexcept {
    return mix64(key ^ mix64(word + 0x71c9d3f4a2b85e01ULL));
}

inline constexpr std::uint64_t derive_seed(std::uint64_t key, std::uint64_t a,
                                           std::uint64_t b) noexcept {
    return derive_seed(derive_seed(key, a), b);
}

inline constexpr double to_unit_double(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;  // [0,1)
}

// Uniform edge values for the simultaneous coupling: value(e) is a pure
// function of (root_seed, canonical edge index). An edge is p-open iff
// value(e) < p, so configurations at p1 <= p2 are nested by construction.
class EdgeRandomness {
public:
    explicit EdgeRandomness(std::uint64_t root_seed) noexcept
        : key_(mix64(root_seed ^ 0x9d8f2c1b77aa31e5ULL)) {}

    // splitmix64 evaluated at stream position edge_index: the finalizer is
    // built for Weyl-spaced inputs, and random access keeps the function pure.
    double value(std::uint64_t edge_index) const noexcept {
        return to_unit_double(mix64(key_ + edge_index * 0x9e3779b97f4a7c15ULL));
    }

    bool open(std::uint64_t edge_index, double p) const noexcept {
        return value(edge_index) < p;
    }

    // Integer form of the openness test: value(e) < p iff the top 53 bits of
    // the hash fall below ceil(p * 2^53). Multiplying by a power of two is
    // exact, so this matches the double comparison bit for bit.
    static std::uint64_t open_threshold(double p) noexcept {
        if (p >= 1.0) return std::uint64_t{1} << 53;
        if (p <= 0.0) return 0;
        return static_cast<std::uint64_t>(__builtin_ceil(p * 0x1.0p53));
    }

    bool open_below(std::uint64_t edge_index, std::uint64_t threshold) const noexcept {
        return (mix64(key_ + edge_index * 0x9e3779b97f4a7c15ULL) >> 11) < threshold;
    }

    std::uint64_t key() const noexcept { return key_; }

private:
    std::uint64_t key_;
};

// Counter-based sequential stream for walks and shuffles.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) noexcept : key_(mix64(seed)), counter_(0) {}

    std::uint64_t next_u64() noexcept { return mix64(key_ + 0x632be59bd9b4e019ULL * ++counter_); }

    double next_unit() noexcept { return to_unit_double(next_u64()); }

    // Unbiased integer in [0, n) via 128-bit multiply with rejection.
    std::uint64_t next_below(std::uint64_t n) noexcept {
        for (;;) {
            std::uint64_t x = next_u64();
            __uint128_t m = static_cast<__uint128_t>(x) * n;
            auto lo = static_cast<std::uint64_t>(m);
            if (lo >= n || lo >= static_cast<std::uint64_t>(-static_cast<std::int64_t>(n)) % n)
                return static_cast<std::uint64_t>(m >> 64);
        }
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_;
};

}  // namespace percolab
