#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "percolab/graph.hpp"
#include "percolab/union_find.hpp"

namespace percolab {

// Exhaustive-enumeration oracle for graphs with at most 22 edges. One pass
// over all 2^|E| configurations accumulates per-open-count sufficient
// statistics, after which every quantity (two-point function, cluster law,
// susceptibility, magnetization, triangle diagram) is an exact polynomial in p
// evaluated on demand.
class SmallGraphOracle {
public:
    static constexpr std::uint32_t kMaxEdges = 22;

    explicit SmallGraphOracle(const TransitiveGraph& g)
        : v_(g.vertex_count()), e_(static_cast<std::uint32_t>(g.edge_count())) {
        if (g.edge_count() > kMaxEdges)
            throw std::invalid_argument("oracle: more than 22 edges, enumeration refused");
        std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
        edges.reserve(e_);
        g.for_each_edge([&](EdgeIndex, Vertex u, Vertex v) {
            edges.emplace_back(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v));
        });

        pair_count_.assign((e_ + 1) * v_ * v_, 0);
        law_count_.assign((e_ + 1) * (v_ + 1), 0);

        std::vector<std::uint32_t> comp(v_);
        const std::uint64_t configs = std::uint64_t{1} << e_;
        UnionFind uf(v_);
        for (std::uint64_t mask = 0; mask < configs; ++mask) {
            uf.reset();
            for (std::uint32_t b = 0; b < e_; ++b)
                if (mask >> b & 1) uf.unite(edges[b].first, edges[b].second);
            const std::uint32_t o = static_cast<std::uint32_t>(std::popcount(mask));
            for (std::uint32_t x = 0; x < v_; ++x) comp[x] = uf.find(x);
            std::uint32_t* pc = &pair_count_[std::uint64_t{o} * v_ * v_];
            for (std::uint32_t x = 0; x < v_; ++x)
                for (std::uint32_t y = x; y < v_; ++y)
                    if (comp[x] == comp[y]) {
                        ++pc[x * v_ + y];
                        if (x != y) ++pc[y * v_ + x];
                    }
            ++law_count_[std::uint64_t{o} * (v_ + 1) + uf.size_of_root(comp[0])];
        }
    }

    std::uint64_t vertex_count() const noexcept { return v_; }
    std::uint32_t edge_count() const noexcept { return e_; }

    // P_p(x <-> y), exact.
    double connection_probability(double p, Vertex x, Vertex y) const {
        auto w = weights(p);
        double s = 0;
        for (std::uint32_t o = 0; o <= e_; ++o)
            s += w[o] * pair_count_[std::uint64_t{o} * v_ * v_ + x * v_ + y];
        return s;
    }

    // Full two-point matrix T[x][y] = P_p(x <-> y).
    std::vector<double> two_point(double p) const {
        auto w = weights(p);
        std::vector<double> t(v_ * v_, 0.0);
        for (std::uint32_t o = 0; o <= e_; ++o) {
            const std::uint32_t* pc = &pair_count_[std::uint64_t{o} * v_ * v_];
            for (std::uint64_t i = 0; i < t.size(); ++i) t[i] += w[o] * pc[i];
        }
        return t;
    }

    // P_p(|C(0)| = k) for k = 1..V.
    std::vector<double> cluster_law(double p) const {
        auto w = weights(p);
        std::vector<double> law(v_ + 1, 0.0);
        for (std::uint32_t o = 0; o <= e_; ++o)
            for (std::uint32_t k = 1; k <= v_; ++k)
                law[k] += w[o] * law_count_[std::uint64_t{o} * (v_ + 1) + k];
        return law;
    }

    double chi(double p) const {
        auto law = cluster_law(p);
        double s = 0;
        for (std::uint32_t k = 1; k <= v_; ++k) s += static_cast<double>(k) * law[k];
        return s;
    }

    double magnetization(double p, double gamma) const {
        if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("magnetization: gamma in [0,1]");
        auto law = cluster_law(p);
        double s = 0;
        for (std::uint32_t k = 1; k <= v_; ++k)
            s += (1.0 - std::pow(1.0 - gamma, static_cast<double>(k))) * law[k];
        return s;
    }

    // Triangle diagram sum_{u,v} T[x][u] T[u][v] T[v][y] = (T^3)[x][y].
    double nabla(double p, Vertex x, Vertex y) const {
        auto t = two_point(p);
        double s = 0;
        for (std::uint32_t u = 0; u < v_; ++u)
            for (std::uint32_t w2 = 0; w2 < v_; ++w2)
                s += t[x * v_ + u] * t[u * v_ + w2] * t[w2 * v_ + y];
        return s;
    }

    double nabla_max(double p) const {
        auto t = two_point(p);
        std::vector<double> t2(v_ * v_, 0.0);
        for (std::uint32_t x = 0; x < v_; ++x)
            for (std::uint32_t u = 0; u < v_; ++u) {
                double txu = t[x * v_ + u];
                for (std::uint32_t y = 0; y < v_; ++y) t2[x * v_ + y] += txu * t[u * v_ + y];
            }
        double best = 0;
        for (std::uint32_t x = 0; x < v_; ++x)
            for (std::uint32_t y = 0; y < v_; ++y) {
                if (x == y) continue;
                double s = 0;
                for (std::uint32_t u = 0; u < v_; ++u) s += t2[x * v_ + u] * t[u * v_ + y];
                best = std::max(best, s);
            }
        return best;
    }

private:
    std::vector<double> weights(double p) const {
        if (p < 0.0 || p > 1.0) throw std::invalid_argument("oracle: p outside [0,1]");
        std::vector<double> w(e_ + 1);
        for (std::uint32_t o = 0; o <= e_; ++o)
            w[o] = std::pow(p, o) * std::pow(1.0 - p, static_cast<double>(e_ - o));
        return w;
    }

    std::uint64_t v_;
    std::uint32_t e_;
    std::vector<std::uint32_t> pair_count_;  // [open count][x][y]
    std::vector<std::uint32_t> law_count_;   // [open count][|C(0)|]
};

// Slack of the three magnetization differential inequalities at one grid
// point; every slack must be >= 0 (up to finite-difference noise) on any
// finite transitive graph.
struct DiffIneqPoint {
    double p = 0, gamma = 0;
    double magnetization = 0;
    double dM_dp = 0, dM_dgamma = 0;
    double nabla_max = 0;
    double alpha = 0;
    double slack1 = 0;  // degree (1-gamma) M dM/dgamma - (1-p) dM/dp
    double slack2 = 0;  // RHS of the partition inequality minus M
    double slack3 = 0;  // M minus the double-connection lower bound
    double fd_residual = 0;  // h vs h/2 central-difference disagreement
};

// Central differences with h = 1e-5 on the exact polynomial; truncation error
// ~h^2 dominates rounding for these small graphs.
inline std::vector<DiffIneqPoint> check_differential_inequalities(
    const SmallGraphOracle& oracle, std::uint32_t degree, const std::vector<double>& p_grid,
    const std::vector<double>& gamma_grid, double h = 1e-5) {
    std::vector<DiffIneqPoint> out;
    out.reserve(p_grid.size() * gamma_grid.size());
    const double md = degree;
    for (double p : p_grid) {
        if (p - 2 * h <= 0.0 || p + 2 * h >= 1.0)
            throw std::invalid_argument("diff-ineq: p grid must be interior to (0,1)");
        const double nmax = oracle.nabla_max(p);
        for (double gamma : gamma_grid) {
            if (gamma - 2 * h <= 0.0 || gamma + 2 * h >= 1.0)
                throw std::invalid_argument("diff-ineq: gamma grid must be interior to (0,1)");
            DiffIneqPoint pt;
            pt.p = p;
            pt.gamma = gamma;
            pt.nabla_max = nmax;
            pt.magnetization = oracle.magnetization(p, gamma);
            auto dp = [&](double hh) {
                return (oracle.magnetization(p + hh, gamma) - oracle.magnetization(p - hh, gamma)) /
                       (2 * hh);
            };
            auto dg = [&](double hh) {
                return (oracle.magnetization(p, gamma + hh) - oracle.magnetization(p, gamma - hh)) /
                       (2 * hh);
            };
            pt.dM_dp = dp(h);
            pt.dM_dgamma = dg(h);
            pt.fd_residual =
                std::max(std::abs(pt.dM_dp - dp(h / 2)), std::abs(pt.dM_dgamma - dg(h / 2)));

            const double M = pt.magnetization;
            pt.slack1 = md * (1.0 - gamma) * M * pt.dM_dgamma - (1.0 - p) * pt.dM_dp;
            pt.slack2 = gamma * pt.dM_dgamma + (0.5 * md * p * M * M + gamma * M) +
                        (0.5 * md * p * M + gamma) * p * pt.dM_dp - M;
            pt.alpha = (1.0 - 2.0 * p) * (1.0 - 2.0 * p) -
                       (1.0 + md * p + 2.0 * (md * p) * (md * p)) * nmax - md * p * M -
                       (md * p) * (md * p) * M * M;
            pt.slack3 =
                M - md * p *
                        (gamma + (1.0 - gamma) * 0.5 * md * (md - 1.0) * p * p * pt.alpha * M * M) *
                        pt.dM_dgamma;
            out.push_back(pt);
        }
    }
    return out;
}

}  // namespace percolab
