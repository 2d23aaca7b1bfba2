#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "percolab/graph.hpp"
#include "percolab/percolation.hpp"
#include "percolab/rng.hpp"
#include "percolab/union_find.hpp"

namespace percolab {

// Two-round decomposition p = p1 + (1-p1) p2 with p2 = theta eps / degree.
// Round one runs at p1; round two "sprinkles" an independent p2 layer whose
// union with round one is distributed exactly as percolation at p.
struct SprinklePlan {
    double epsilon = 0;
    double theta = 0;
    double p = 0;   // target probability, p_c(1+eps)
    double p1 = 0;
    double p2 = 0;
    std::uint64_t k0 = 0;  // large-cluster threshold eps^-2 (eps^3 V)^{1/4}
};

inline SprinklePlan sprinkle_plan(const TransitiveGraph& g, double p_hat_c, double epsilon,
                                  double theta) {
    if (epsilon <= 0.0 || epsilon >= 1.0) throw std::invalid_argument("sprinkle: eps in (0,1)");
    if (theta <= 0.0 || theta >= 1.0 / 3.0)
        throw std::invalid_argument("sprinkle: theta in (0, 1/3)");
    SprinklePlan plan;
    plan.epsilon = epsilon;
    plan.theta = theta;
    plan.p = p_hat_c * (1.0 + epsilon);
    plan.p2 = theta * epsilon / static_cast<double>(g.degree());
    if (plan.p2 >= plan.p) throw std::invalid_argument("sprinkle: theta too large for eps");
    plan.p1 = (plan.p - plan.p2) / (1.0 - plan.p2);
    double v = static_cast<double>(g.vertex_count());
    plan.k0 = static_cast<std::uint64_t>(
        std::ceil(std::pow(epsilon * epsilon * epsilon * v, 0.25) / (epsilon * epsilon)));
    return plan;
}

struct SprinkleOutcome {
    double p1 = 0, p2 = 0;
    std::uint64_t z_at_p1 = 0;       // vertices in p1-clusters of size >= k0
    std::uint64_t c1_at_p1 = 0;
    std::uint64_t c1_after = 0;      // largest cluster of the two-layer union
    double merge_fraction = 0;       // c1_after / z_at_p1
    bool boundary_defined = false;   // at least two qualifying p1-clusters
    std::uint64_t boundary_closed_edges = 0;
    double boundary_ratio = 0;       // closed edges / (eps^2 m V)
    std::uint64_t union_open_edges = 0;
    double union_edge_density = 0;
};

namespace detail {

struct ClusterPartition {
    std::vector<Vertex> side_a, side_b;
};

// Greedy balance of whole clusters (never splitting one), descending size,
// ties by the cluster representative.
inline ClusterPartition partition_large_clusters(const TransitiveGraph& g,
                                                 const ClusterDecomposition& decomp,
                                                 std::uint64_t k0) {
    struct Entry {
        std::uint64_t size;
        std::uint32_t root;
    };
    std::unordered_map<std::uint32_t, std::uint64_t> root_sizes;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (decomp.size_of(v) >= k0) root_sizes.emplace(decomp.component_of(v), decomp.size_of(v));
    }
    std::vector<Entry> entries;
    entries.reserve(root_sizes.size());
    for (auto& [root, size] : root_sizes) entries.push_back({size, root});
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.size != b.size ? a.size > b.size : a.root < b.root;
    });
    if (entries.size() < 2)
        throw std::runtime_error("sprinkle boundary: nothing to partition");
    std::unordered_map<std::uint32_t, bool> to_b;
    std::uint64_t wa = 0, wb = 0;
    for (const Entry& e : entries) {
        bool b = wb < wa;
        to_b[e.root] = b;
        (b ? wb : wa) += e.size;
    }
    ClusterPartition part;
    part.side_a.reserve(wa);
    part.side_b.reserve(wb);
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        auto it = to_b.find(decomp.component_of(v));
        if (it == to_b.end() || decomp.size_of(v) < k0) continue;
        (it->second ? part.side_b : part.side_a).push_back(v);
    }
    return part;
}

}  // namespace detail

inline SprinkleOutcome sprinkle_run(const TransitiveGraph& g, const SprinklePlan& plan,
                                    std::uint64_t seed) {
    EdgeRandomness layer1(derive_seed(seed, 0));
    EdgeRandomness layer2(derive_seed(seed, 1));

    ClusterDecomposition first = decompose(g, layer1, plan.p1);

    SprinkleOutcome out;
    out.p1 = plan.p1;
    out.p2 = plan.p2;
    out.z_at_p1 = count_at_least(first, std::max<std::uint64_t>(plan.k0, 1));
    out.c1_at_p1 = first.largest();

    UnionFind uf(g.vertex_count());
    std::uint64_t open = 0;
    g.for_each_edge([&](EdgeIndex idx, Vertex u, Vertex v) {
        if (layer1.value(idx) < plan.p1 || layer2.value(idx) < plan.p2) {
            ++open;
            uf.unite(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v));
        }
    });
    ClusterDecomposition merged(plan.p, std::move(uf));
    out.c1_after = merged.largest();
    out.merge_fraction =
        out.z_at_p1 ? static_cast<double>(out.c1_after) / static_cast<double>(out.z_at_p1)
                    : std::nan("");
    out.union_open_edges = open;
    out.union_edge_density = static_cast<double>(open) / static_cast<double>(g.edge_count());

    try {
        auto part = detail::partition_large_clusters(g, first, plan.k0);
        out.boundary_defined = true;
        out.boundary_closed_edges =
            closed_boundary_edges(g, layer1, plan.p1, part.side_a, part.side_b);
        out.boundary_ratio = static_cast<double>(out.boundary_closed_edges) /
                             (plan.epsilon * plan.epsilon * static_cast<double>(g.degree()) *
                              static_cast<double>(g.vertex_count()));
    } catch (const std::runtime_error&) {
        out.boundary_defined = false;
    }
    return out;
}

struct BoundaryOutcome {
    std::uint64_t closed_edges = 0;
    double ratio = 0;  // closed edges / (eps^2 m V)
    std::uint64_t side_a_vertices = 0;
    std::uint64_t side_b_vertices = 0;
};

// Partition the vertices lying in p1-clusters of size >= k0 into two
// near-equal halves (whole clusters only) and count the p1-closed edges
// between the halves. Throws when fewer than two clusters qualify.
inline BoundaryOutcome boundary_experiment(const TransitiveGraph& g, const SprinklePlan& plan,
                                           std::uint64_t seed) {
    EdgeRandomness layer1(derive_seed(seed, 0));
    ClusterDecomposition first = decompose(g, layer1, plan.p1);
    auto part = detail::partition_large_clusters(g, first, plan.k0);
    BoundaryOutcome out;
    out.side_a_vertices = part.side_a.size();
    out.side_b_vertices = part.side_b.size();
    out.closed_edges = closed_boundary_edges(g, layer1, plan.p1, part.side_a, part.side_b);
    out.ratio = static_cast<double>(out.closed_edges) /
                (plan.epsilon * plan.epsilon * static_cast<double>(g.degree()) *
                 static_cast<double>(g.vertex_count()));
    return out;
}

}  // namespace percolab
