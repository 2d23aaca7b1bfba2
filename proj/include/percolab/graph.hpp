#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "percolab/rng.hpp"

namespace percolab {

using Vertex = std::uint64_t;
using EdgeIndex = std::uint64_t;

enum class Family { Hypercube, Hamming, Torus, Complete, RandomRegular };

// Parsed from / serialized to config strings such as
//   hypercube:m=20   hamming:n=10,d=3   torus:n=5,d=6
//   complete:n=100000   regular:n=65536,m=24,seed=7
struct GraphSpec {
    Family family = Family::Hypercube;
    std::uint32_t m = 0;     // hypercube dimension / regular degree
    std::uint64_t n = 0;     // clique size / side / vertex count
    std::uint32_t d = 0;     // factors / torus dimension
    std::uint64_t seed = 0;  // random-regular generation seed

    static GraphSpec hypercube(std::uint32_t m) { return {Family::Hypercube, m, 0, 0, 0}; }
    static GraphSpec hamming(std::uint64_t n, std::uint32_t d) {
        return {Family::Hamming, 0, n, d, 0};
    }
    static GraphSpec torus(std::uint64_t n, std::uint32_t d) { return {Family::Torus, 0, n, d, 0}; }
    static GraphSpec complete(std::uint64_t n) { return {Family::Complete, 0, n, 0, 0}; }
    static GraphSpec random_regular(std::uint64_t n, std::uint32_t m, std::uint64_t seed) {
        return {Family::RandomRegular, m, n, 0, seed};
    }

    static GraphSpec parse(const std::string& text);
    std::string to_string() const;
};

namespace detail {

// Unordered pair {a,b}, a<b, mapped to a flat index in [0, n(n-1)/2).
inline std::uint64_t pair_index(std::uint64_t a, std::uint64_t b, std::uint64_t n) noexcept {
    return a * n - a * (a + 1) / 2 + (b - a - 1);
}

inline std::uint64_t remove_bit(std::uint64_t v, unsigned i) noexcept {
    std::uint64_t low = v & ((std::uint64_t{1} << i) - 1);
    return low | ((v >> (i + 1)) << i);
}

}  // namespace detail

// A vertex-transitive graph with dense integer vertex codes and a canonical
// bijective edge indexing. Neighbors are computed, not stored, except for
// random regular graphs. Immutable after construction; safe to share across
// threads.
class TransitiveGraph {
public:
    static constexpr std::uint64_t kMaxEdges = std::uint64_t{1} << 33;

    explicit TransitiveGraph(const GraphSpec& spec) : spec_(spec) {
        switch (spec.family) {
            case Family::Hypercube: {
                if (spec.m < 1 || spec.m > 28)
                    throw std::invalid_argument("hypercube: need 1 <= m <= 28");
                vertices_ = std::uint64_t{1} << spec.m;
                degree_ = spec.m;
                edges_ = std::uint64_t{spec.m} << (spec.m - 1);
                break;
            }
            case Family::Hamming: {
                if (spec.n < 2 || spec.d < 1) throw std::invalid_argument("hamming: need n >= 2, d >= 1");
                vertices_ = ipow_checked(spec.n, spec.d);
                degree_ = spec.d * (spec.n - 1);
                edges_ = vertices_ / spec.n * (spec.d * spec.n * (spec.n - 1) / 2);
                break;
            }
            case Family::Torus: {
                if (spec.n < 3) throw std::invalid_argument("torus: need n >= 3");
                if (spec.d < 1) throw std::invalid_argument("torus: need d >= 1");
                vertices_ = ipow_checked(spec.n, spec.d);
                degree_ = 2 * spec.d;
                edges_ = std::uint64_t{spec.d} * vertices_;
                break;
            }
            case Family::Complete: {
                if (spec.n < 2) throw std::invalid_argument("complete: need n >= 2");
                vertices_ = spec.n;
                degree_ = spec.n - 1;
                edges_ = spec.n * (spec.n - 1) / 2;
                break;
            }
            case Family::RandomRegular: {
                if (spec.m < 1 || spec.m >= spec.n)
                    throw std::invalid_argument("regular: need 1 <= degree < n");
                if ((spec.n * spec.m) % 2 != 0)
                    throw std::invalid_argument("regular: n*degree must be even");
                vertices_ = spec.n;
                degree_ = spec.m;
                edges_ = spec.n * spec.m / 2;
                build_random_regular();
                break;
            }
        }
        if (edges_ > kMaxEdges) throw std::invalid_argument("graph exceeds the 2^33 edge limit");
        if (spec.family == Family::Hamming || spec.family == Family::Torus) {
            radix_pow_.resize(spec.d + 1);
            radix_pow_[0] = 1;
            for (std::uint32_t i = 0; i < spec.d; ++i) radix_pow_[i + 1] = radix_pow_[i] * spec.n;
        }
    }

    const GraphSpec& spec() const noexcept { return spec_; }
    std::uint64_t vertex_count() const noexcept { return vertices_; }
    std::uint32_t degree() const noexcept { return degree_; }
    std::uint64_t edge_count() const noexcept { return edges_; }

    // Graph-metric distance; exposed for the families where it is closed-form.
    std::optional<std::uint32_t> graph_distance(Vertex x, Vertex y) const noexcept {
        switch (spec_.family) {
            case Family::Hypercube:
                return std::popcount(x ^ y);
            case Family::Complete:
                return x == y ? 0u : 1u;
            default:
                return std::nullopt;
        }
    }

    // f(neighbor, canonical_edge_index) for each of the `degree` neighbors.
    template <class F>
    void for_each_neighbor(Vertex v, F&& f) const {
        switch (spec_.family) {
            case Family::Hypercube: {
                std::uint64_t half = vertices_ >> 1;
                for (std::uint32_t i = 0; i < degree_; ++i) {
                    std::uint64_t bit = std::uint64_t{1} << i;
                    Vertex u = v ^ bit;
                    std::uint64_t tail = v & ~bit;
                    f(u, std::uint64_t{i} * half + detail::remove_bit(tail, i));
                }
                break;
            }
            case Family::Hamming: {
                std::uint64_t n = spec_.n;
                std::uint64_t pairs = n * (n - 1) / 2;
                std::uint64_t rest_block = (vertices_ / n) * pairs;
                for (std::uint32_t c = 0; c < spec_.d; ++c) {
                    std::uint64_t digit = (v / radix_pow_[c]) % n;
                    // code with coordinate c removed, read as d-1 base-n digits
                    std::uint64_t rest =
                        v % radix_pow_[c] + (v / radix_pow_[c + 1]) * radix_pow_[c];
                    std::uint64_t base = std::uint64_t{c} * rest_block + rest * pairs;
                    Vertex stem = v - digit * radix_pow_[c];
                    for (std::uint64_t s = 0; s < n; ++s) {
                        if (s == digit) continue;
                        f(stem + s * radix_pow_[c],
                          base + detail::pair_index(std::min(digit, s), std::max(digit, s), n));
                    }
                }
                break;
            }
            case Family::Torus: {
                std::uint64_t n = spec_.n;
                for (std::uint32_t a = 0; a < spec_.d; ++a) {
                    std::uint64_t digit = (v / radix_pow_[a]) % n;
                    Vertex up = digit + 1 == n ? v - digit * radix_pow_[a] : v + radix_pow_[a];
                    Vertex down = digit == 0 ? v + (n - 1) * radix_pow_[a] : v - radix_pow_[a];
                    f(up, std::uint64_t{a} * vertices_ + v);     // +1 edge owned by v
                    f(down, std::uint64_t{a} * vertices_ + down);  // +1 edge owned by `down`
                }
                break;
            }
            case Family::Complete: {
                for (Vertex u = 0; u < vertices_; ++u) {
                    if (u == v) continue;
                    f(u, detail::pair_index(std::min(u, v), std::max(u, v), vertices_));
                }
                break;
            }
            case Family::RandomRegular: {
                const auto* adj = &adjacency_[v * degree_];
                for (std::uint32_t t = 0; t < degree_; ++t) f(adj[t].neighbor, adj[t].edge);
                break;
            }
        }
    }

    std::vector<Vertex> neighbors(Vertex v) const {
        if (v >= vertices_) throw std::invalid_argument("neighbors: vertex out of range");
        std::vector<Vertex> out;
        out.reserve(degree_);
        for_each_neighbor(v, [&](Vertex u, EdgeIndex) { out.push_back(u); });
        return out;
    }

    // f(edge_index, u, v) over every canonical edge, exactly once.
    template <class F>
    void for_each_edge(F&& f) const {
        switch (spec_.family) {
            case Family::Hypercube: {
                std::uint64_t idx = 0;
                for (std::uint32_t i = 0; i < degree_; ++i) {
                    std::uint64_t bit = std::uint64_t{1} << i;
                    for (Vertex v = 0; v < vertices_; ++v) {
                        if (v & bit) continue;
                        f(idx++, v, v | bit);
                    }
                }
                break;
            }
            case Family::Hamming: {
                std::uint64_t n = spec_.n;
                std::uint64_t idx = 0;
                for (std::uint32_t c = 0; c < spec_.d; ++c) {
                    std::uint64_t rests = vertices_ / n;
                    for (std::uint64_t rest = 0; rest < rests; ++rest) {
                        Vertex base = rest % radix_pow_[c] +
                                      (rest / radix_pow_[c]) * radix_pow_[c + 1];
                        for (std::uint64_t a = 0; a + 1 < n; ++a)
                            for (std::uint64_t b = a + 1; b < n; ++b)
                                f(idx++, base + a * radix_pow_[c], base + b * radix_pow_[c]);
                    }
                }
                break;
            }
            case Family::Torus: {
                std::uint64_t n = spec_.n;
                std::uint64_t idx = 0;
                for (std::uint32_t a = 0; a < spec_.d; ++a) {
                    for (Vertex v = 0; v < vertices_; ++v) {
                        std::uint64_t digit = (v / radix_pow_[a]) % n;
                        Vertex up = digit + 1 == n ? v - digit * radix_pow_[a] : v + radix_pow_[a];
                        f(idx++, v, up);
                    }
                }
                break;
            }
            case Family::Complete: {
                std::uint64_t idx = 0;
                for (Vertex i = 0; i + 1 < vertices_; ++i)
                    for (Vertex j = i + 1; j < vertices_; ++j) f(idx++, i, j);
                break;
            }
            case Family::RandomRegular: {
                for (std::uint64_t e = 0; e < edges_; ++e)
                    f(e, edge_list_[e].first, edge_list_[e].second);
                break;
            }
        }
    }

    // f(u, v) over canonical edges with value(e) < p. The per-family loops keep
    // the hash in the innermost loop with no per-edge dispatch. Complete graphs
    // get an unrolled loop: at 5e9 edges the hash throughput is the whole cost.
    template <class F>
    void for_each_open_edge(const EdgeRandomness& rnd, double p, F&& f) const {
        if (p <= 0.0) return;
        const std::uint64_t thr = EdgeRandomness::open_threshold(p);
        if (spec_.family == Family::Complete) {
            const std::uint64_t n = vertices_;
            std::uint64_t idx = 0;
            for (Vertex i = 0; i + 1 < n; ++i) {
                Vertex j = i + 1;
                std::uint64_t run = n - j;
                std::uint64_t quads = run / 4;
                for (std::uint64_t q = 0; q < quads; ++q) {
                    bool o0 = rnd.open_below(idx, thr);
                    bool o1 = rnd.open_below(idx + 1, thr);
                    bool o2 = rnd.open_below(idx + 2, thr);
                    bool o3 = rnd.open_below(idx + 3, thr);
                    if (o0) f(i, j);
                    if (o1) f(i, j + 1);
                    if (o2) f(i, j + 2);
                    if (o3) f(i, j + 3);
                    idx += 4;
                    j += 4;
                }
                for (; j < n; ++j, ++idx)
                    if (rnd.open_below(idx, thr)) f(i, j);
            }
            return;
        }
        for_each_edge([&](EdgeIndex idx, Vertex u, Vertex v) {
            if (rnd.open_below(idx, thr)) f(u, v);
        });
    }

    // Canonical index of the edge between two adjacent vertices.
    EdgeIndex edge_index_between(Vertex u, Vertex v) const {
        EdgeIndex found = kMaxEdges;
        for_each_neighbor(u, [&](Vertex w, EdgeIndex e) {
            if (w == v) found = e;
        });
        if (found == kMaxEdges) throw std::invalid_argument("edge_index_between: not adjacent");
        return found;
    }

    // Reference critical point for the hypercube family: 1/(m-1) + 7/(2 m^3).
    // The m^-3 term is the leading finite-degree correction to the
    // branching-process value; used to key supercritical experiments.
    static double hypercube_pc_reference(std::uint32_t m) {
        if (m < 2) throw std::invalid_argument("pc reference needs m >= 2");
        double md = m;
        return 1.0 / (md - 1.0) + 3.5 / (md * md * md);
    }

private:
    struct AdjEntry {
        Vertex neighbor;
        EdgeIndex edge;
    };

    static std::uint64_t ipow_checked(std::uint64_t base, std::uint32_t exp) {
        std::uint64_t r = 1;
        for (std::uint32_t i = 0; i < exp; ++i) {
            if (r > (std::uint64_t{1} << 40) / base)
                throw std::invalid_argument("graph too large");
            r *= base;
        }
        return r;
    }

    // Configuration model. A full restart on any defect has acceptance
    // probability ~exp(-(deg^2-1)/4) and never terminates for deg >= 8, so
    // self-loops and multi-edges are repaired by random degree-preserving
    // switches instead; a fresh pairing is drawn only if repair stalls.
    void build_random_regular() {
        const std::uint64_t n = spec_.n;
        const std::uint32_t deg = spec_.m;
        auto key = [n](Vertex a, Vertex b) { return std::min(a, b) * n + std::max(a, b); };
        for (int attempt = 0; attempt < 64; ++attempt) {
            CounterRng rng(derive_seed(spec_.seed, 0xA11CE, attempt));
            std::vector<std::uint32_t> stubs(n * deg);
            for (std::uint64_t i = 0; i < stubs.size(); ++i)
                stubs[i] = static_cast<std::uint32_t>(i / deg);
            for (std::uint64_t i = stubs.size() - 1; i > 0; --i)
                std::swap(stubs[i], stubs[rng.next_below(i + 1)]);
            std::vector<std::pair<Vertex, Vertex>> edges(stubs.size() / 2);
            std::unordered_map<std::uint64_t, std::uint32_t> multiplicity;
            multiplicity.reserve(edges.size() * 2);
            for (std::uint64_t i = 0; i < edges.size(); ++i) {
                edges[i] = {stubs[2 * i], stubs[2 * i + 1]};
                if (edges[i].first != edges[i].second) ++multiplicity[key(edges[i].first, edges[i].second)];
            }
            auto is_bad = [&](const std::pair<Vertex, Vertex>& e) {
                return e.first == e.second || multiplicity[key(e.first, e.second)] > 1;
            };
            // switches only remove defects, so a monotone cursor suffices
            std::uint64_t budget = 400 * edges.size();
            bool clean = false;
            std::uint64_t bad = 0;
            for (std::uint64_t step = 0; step < budget; ++step) {
                while (bad < edges.size() && !is_bad(edges[bad])) ++bad;
                if (bad == edges.size()) { clean = true; break; }
                std::uint64_t other = rng.next_below(edges.size());
                if (other == bad) continue;
                auto [a, b] = edges[bad];
                auto [c, d] = edges[other];
                if (rng.next_below(2)) std::swap(c, d);
                // rewire {a,b},{c,d} -> {a,c},{b,d} when both new edges are simple
                if (a == c || b == d) continue;
                if (multiplicity[key(a, c)] > 0 || multiplicity[key(b, d)] > 0) continue;
                if (key(a, c) == key(b, d)) continue;
                if (a != b) --multiplicity[key(a, b)];
                if (c != d) --multiplicity[key(c, d)];
                ++multiplicity[key(a, c)];
                ++multiplicity[key(b, d)];
                edges[bad] = {a, c};
                edges[other] = {b, d};
            }
            if (!clean) continue;
            for (auto& [a, b] : edges)
                if (a > b) std::swap(a, b);
            std::sort(edges.begin(), edges.end());
            edge_list_ = std::move(edges);
            adjacency_.assign(n * deg, {0, 0});
            std::vector<std::uint32_t> fill(n, 0);
            for (std::uint64_t e = 0; e < edge_list_.size(); ++e) {
                auto [a, b] = edge_list_[e];
                adjacency_[a * deg + fill[a]++] = {b, e};
                adjacency_[b * deg + fill[b]++] = {a, e};
            }
            return;
        }
        throw std::runtime_error("regular: pairing repair failed to produce a simple graph");
    }

    GraphSpec spec_;
    std::uint64_t vertices_ = 0;
    std::uint32_t degree_ = 0;
    std::uint64_t edges_ = 0;
    std::vector<std::uint64_t> radix_pow_;
    std::vector<std::pair<Vertex, Vertex>> edge_list_;  // random regular only
    std::vector<AdjEntry> adjacency_;                   // random regular only
};

inline GraphSpec GraphSpec::parse(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("graph spec: missing ':'");
    std::string name = text.substr(0, colon);
    std::uint64_t m = 0, n = 0, d = 0, seed = 0;
    bool has_m = false, has_n = false, has_d = false, has_seed = false;
    std::size_t pos = colon + 1;
    while (pos < text.size()) {
        auto eq = text.find('=', pos);
        if (eq == std::string::npos) throw std::invalid_argument("graph spec: expected key=value");
        std::string key = text.substr(pos, eq - pos);
        auto comma = text.find(',', eq);
        std::string value = text.substr(eq + 1, comma == std::string::npos ? std::string::npos
                                                                           : comma - eq - 1);
        std::uint64_t parsed = 0;
        try {
            parsed = std::stoull(value);
        } catch (const std::exception&) {
            throw std::invalid_argument("graph spec: bad number '" + value + "'");
        }
        if (key == "m") { m = parsed; has_m = true; }
        else if (key == "n") { n = parsed; has_n = true; }
        else if (key == "d") { d = parsed; has_d = true; }
        else if (key == "seed") { seed = parsed; has_seed = true; }
        else throw std::invalid_argument("graph spec: unknown key '" + key + "'");
        pos = comma == std::string::npos ? text.size() : comma + 1;
    }
    if (name == "hypercube") {
        if (!has_m) throw std::invalid_argument("hypercube: need m");
        return GraphSpec::hypercube(static_cast<std::uint32_t>(m));
    }
    if (name == "hamming") {
        if (!has_n || !has_d) throw std::invalid_argument("hamming: need n and d");
        return GraphSpec::hamming(n, static_cast<std::uint32_t>(d));
    }
    if (name == "torus") {
        if (!has_n || !has_d) throw std::invalid_argument("torus: need n and d");
        return GraphSpec::torus(n, static_cast<std::uint32_t>(d));
    }
    if (name == "complete") {
        if (!has_n) throw std::invalid_argument("complete: need n");
        return GraphSpec::complete(n);
    }
    if (name == "regular") {
        if (!has_n || !has_m) throw std::invalid_argument("regular: need n and m");
        return GraphSpec::random_regular(n, static_cast<std::uint32_t>(m), has_seed ? seed : 0);
    }
    throw std::invalid_argument("graph spec: unknown family '" + name + "'");
}

inline std::string GraphSpec::to_string() const {
    switch (family) {
        case Family::Hypercube: return "hypercube:m=" + std::to_string(m);
        case Family::Hamming:
            return "hamming:n=" + std::to_string(n) + ",d=" + std::to_string(d);
        case Family::Torus: return "torus:n=" + std::to_string(n) + ",d=" + std::to_string(d);
        case Family::Complete: return "complete:n=" + std::to_string(n);
        case Family::RandomRegular:
            return "regular:n=" + std::to_string(n) + ",m=" + std::to_string(m) +
                   ",seed=" + std::to_string(seed);
    }
    return "";
}

}  // namespace percolab
