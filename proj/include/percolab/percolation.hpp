#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "percolab/bitset.hpp"
#include "percolab/graph.hpp"
#include "percolab/rng.hpp"
#include "percolab/union_find.hpp"

namespace percolab {

// Output of a full union-find pass over the p-open edges.
//
// component[v] is the union-find root of v's cluster; root_size[r] holds the
// cluster size at root positions. sizes() is the multiset of cluster sizes in
// descending order. Cluster ranks break ties by the smallest vertex code in
// the cluster, so C1/C2 are well-defined and reproducible.
class ClusterDecomposition {
public:
    ClusterDecomposition(double p, UnionFind&& uf) : p_(p) {
        const std::uint64_t n = uf.element_count();
        component_.resize(n);
        root_size_.assign(n, 0);
        std::vector<std::pair<std::uint32_t, std::uint32_t>> ranked;  // (size, min vertex)
        for (std::uint64_t v = 0; v < n; ++v) {
            std::uint32_t r = uf.find(static_cast<std::uint32_t>(v));
            component_[v] = r;
            if (root_size_[r] == 0) {
                root_size_[r] = uf.size_of_root(r);
                ranked.emplace_back(root_size_[r], static_cast<std::uint32_t>(v));
            }
        }
        std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
            return a.first != b.first ? a.first > b.first : a.second < b.second;
        });
        sizes_.reserve(ranked.size());
        for (const auto& [size, mv] : ranked) sizes_.push_back(size);
        if (!ranked.empty()) largest_rep_ = ranked[0].second;
        if (ranked.size() > 1) second_rep_ = ranked[1].second;
    }

    double p() const noexcept { return p_; }
    std::uint64_t vertex_count() const noexcept { return component_.size(); }
    std::uint32_t component_of(Vertex v) const noexcept { return component_[v]; }
    std::uint32_t size_of(Vertex v) const noexcept { return root_size_[component_[v]]; }
    const std::vector<std::uint64_t>& sizes() const noexcept { return sizes_; }

    std::uint64_t largest() const noexcept { return sizes_.empty() ? 0 : sizes_[0]; }
    std::uint64_t second_largest() const noexcept { return sizes_.size() > 1 ? sizes_[1] : 0; }
    Vertex largest_representative() const noexcept { return largest_rep_; }
    Vertex second_representative() const noexcept { return second_rep_; }

    double sum_sizes_squared() const noexcept {
        double s = 0;
        for (std::uint64_t v : sizes_) s += static_cast<double>(v) * static_cast<double>(v);
        return s;
    }

private:
    double p_;
    std::vector<std::uint32_t> component_;
    std::vector<std::uint32_t> root_size_;
    std::vector<std::uint64_t> sizes_;
    Vertex largest_rep_ = 0;
    Vertex second_rep_ = 0;
};

inline ClusterDecomposition decompose(const TransitiveGraph& g, const EdgeRandomness& rnd,
                                      double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("decompose: p outside [0,1]");
    UnionFind uf(g.vertex_count());
    g.for_each_open_edge(rnd, p, [&](Vertex u, Vertex v) {
        uf.unite(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v));
    });
    return ClusterDecomposition(p, std::move(uf));
}

// Z_{>=k}: number of vertices lying in clusters of size at least k.
inline std::uint64_t count_at_least(const ClusterDecomposition& decomp, std::uint64_t k) {
    if (k < 1) throw std::invalid_argument("count_at_least: k >= 1 required");
    std::uint64_t z = 0;
    for (std::uint64_t s : decomp.sizes()) {
        if (s < k) break;  // sizes are sorted descending
        z += s;
    }
    return z;
}

// BFS cluster of a single vertex. `size_cap` stops the exploration early once
// the size reaches the cap (used by tail estimators where only |C| >= k
// matters); members are collected only when `out_members` is non-null.
inline std::uint64_t cluster_of(const TransitiveGraph& g, const EdgeRandomness& rnd, double p,
                                Vertex start, std::uint64_t size_cap = 0,
                                std::vector<Vertex>* out_members = nullptr) {
    if (start >= g.vertex_count()) throw std::invalid_argument("cluster_of: vertex out of range");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("cluster_of: p outside [0,1]");
    VertexBitset visited(g.vertex_count());
    std::vector<Vertex> frontier{start}, next;
    visited.set(start);
    std::uint64_t size = 1;
    if (out_members) out_members->push_back(start);
    while (!frontier.empty()) {
        if (size_cap && size >= size_cap) return size;
        next.clear();
        for (Vertex v : frontier) {
            g.for_each_neighbor(v, [&](Vertex u, EdgeIndex e) {
                if (visited.test(u) || !rnd.open(e, p)) return;
                visited.set(u);
                ++size;
                next.push_back(u);
                if (out_members) out_members->push_back(u);
            });
            if (size_cap && size >= size_cap) return size;
        }
        frontier.swap(next);
    }
    return size;
}

// Number of canonical closed edges (value >= p) with one endpoint in A and the
// other in B. A and B must be disjoint.
inline std::uint64_t closed_boundary_edges(const TransitiveGraph& g, const EdgeRandomness& rnd,
                                           double p, const std::vector<Vertex>& a,
                                           const std::vector<Vertex>& b) {
    VertexBitset in_b(g.vertex_count());
    for (Vertex v : b) in_b.set(v);
    for (Vertex v : a)
        if (in_b.test(v)) throw std::invalid_argument("closed_boundary_edges: sets overlap");
    std::uint64_t count = 0;
    for (Vertex u : a) {
        g.for_each_neighbor(u, [&](Vertex w, EdgeIndex e) {
            if (in_b.test(w) && !rnd.open(e, p)) ++count;
        });
    }
    return count;
}

struct SweepPointStats {
    double p = 0;
    double sum_sizes_squared = 0;
    std::uint64_t largest = 0;
    std::uint64_t second_largest = 0;
    std::vector<std::uint64_t> z_at_least;  // parallel to the requested ks
};

struct MergeEvent {
    double value;
    double sum_sizes_squared;
    std::uint64_t largest;
};

struct SweepCurve {
    std::vector<SweepPointStats> at_grid;
    std::vector<MergeEvent> trace;  // populated only when requested
};

// Incremental sweep: add edges in increasing value order and report statistics
// at each grid point. Results coincide with independent decompose() calls on
// the same randomness. Only edges with value < max(p_grid) are materialized.
inline SweepCurve sweep(const TransitiveGraph& g, const EdgeRandomness& rnd,
                        const std::vector<double>& p_grid,
                        const std::vector<std::uint64_t>& ks = {}, bool record_trace = false) {
    if (p_grid.empty()) throw std::invalid_argument("sweep: empty grid");
    for (std::size_t i = 1; i < p_grid.size(); ++i)
        if (p_grid[i] < p_grid[i - 1]) throw std::invalid_argument("sweep: grid not ascending");
    const double p_max = p_grid.back();

    struct WeightedEdge {
        double value;
        std::uint32_t u, v;
    };
    std::vector<WeightedEdge> open;
    g.for_each_edge([&](EdgeIndex idx, Vertex u, Vertex v) {
        double val = rnd.value(idx);
        if (val < p_max)
            open.push_back({val, static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v)});
    });
    std::sort(open.begin(), open.end(),
              [](const WeightedEdge& a, const WeightedEdge& b) { return a.value < b.value; });

    const std::uint64_t n = g.vertex_count();
    UnionFind uf(n);
    double sum_sq = static_cast<double>(n);  // all singletons
    std::uint64_t largest = 1;

    SweepCurve curve;
    std::size_t next_edge = 0;
    for (double p : p_grid) {
        while (next_edge < open.size() && open[next_edge].value < p) {
            const auto& e = open[next_edge++];
            std::uint32_t ra = uf.find(e.u), rb = uf.find(e.v);
            if (ra != rb) {
                double sa = uf.size_of_root(ra), sb = uf.size_of_root(rb);
                sum_sq += 2.0 * sa * sb;
                uf.unite(ra, rb);
                std::uint64_t merged = uf.component_size(e.u);
                if (merged > largest) largest = merged;
                if (record_trace) curve.trace.push_back({e.value, sum_sq, largest});
            }
        }
        SweepPointStats stats;
        stats.p = p;
        stats.sum_sizes_squared = sum_sq;
        stats.largest = largest;
        // second largest and Z need a root scan
        std::uint64_t c2 = 0;
        bool skipped_max = false;
        std::vector<std::uint64_t> z(ks.size(), 0);
        for (std::uint64_t v = 0; v < n; ++v) {
            std::uint32_t r = uf.find(static_cast<std::uint32_t>(v));
            if (r != v) continue;
            std::uint64_t s = uf.size_of_root(r);
            if (s == largest && !skipped_max)
                skipped_max = true;
            else
                c2 = std::max<std::uint64_t>(c2, s);
            for (std::size_t i = 0; i < ks.size(); ++i)
                if (s >= ks[i]) z[i] += s;
        }
        stats.second_largest = c2;
        stats.z_at_least = std::move(z);
        curve.at_grid.push_back(std::move(stats));
    }
    return curve;
}

}  // namespace percolab
