#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "percolab/graph.hpp"
#include "percolab/rng.hpp"

namespace percolab {

// Krawtchouk character sums on {0,1}^m in exact integer arithmetic:
// K[j][w] = sum over k of Hamming weight j of (-1)^{k.z} for any z of weight w.
// Built with the three-term recurrence; values fit comfortably in 64 bits for
// m <= 28 (|K| <= C(m, m/2)).
class KrawtchoukTable {
public:
    explicit KrawtchoukTable(std::uint32_t m) : m_(m), k_((m + 1) * (m + 1)) {
        if (m < 1) throw std::invalid_argument("krawtchouk: m >= 1");
        for (std::uint32_t w = 0; w <= m; ++w) at(0, w) = 1;
        if (m >= 1)
            for (std::uint32_t w = 0; w <= m; ++w)
                at(1, w) = static_cast<std::int64_t>(m) - 2 * static_cast<std::int64_t>(w);
        for (std::uint32_t j = 1; j < m; ++j) {
            for (std::uint32_t w = 0; w <= m; ++w) {
                __int128 num = static_cast<__int128>(static_cast<std::int64_t>(m) -
                                                     2 * static_cast<std::int64_t>(w)) *
                                   at(j, w) -
                               static_cast<__int128>(m - j + 1) * at(j - 1, w);
                at(j + 1, w) = static_cast<std::int64_t>(num / static_cast<std::int64_t>(j + 1));
            }
        }
    }

    std::uint32_t m() const noexcept { return m_; }
    std::int64_t operator()(std::uint32_t j, std::uint32_t w) const noexcept {
        return k_[j * (m_ + 1) + w];
    }

    static std::int64_t binomial(std::uint32_t n, std::uint32_t k) noexcept {
        if (k > n) return 0;
        __int128 r = 1;
        for (std::uint32_t i = 0; i < k; ++i) { r *= n - i; r /= i + 1; }
        return static_cast<std::int64_t>(r);
    }

    // Exact orthogonality defect: sum_w C(m,w) K[j][w] K[j'][w] - V C(m,j) 1{j=j'}.
    // Zero for a correct table; used by the property suite.
    __int128 orthogonality_defect(std::uint32_t j, std::uint32_t jp) const {
        __int128 s = 0;
        for (std::uint32_t w = 0; w <= m_; ++w)
            s += static_cast<__int128>(binomial(m_, w)) * (*this)(j, w) * (*this)(jp, w);
        if (j == jp) s -= (static_cast<__int128>(1) << m_) * binomial(m_, j);
        return s;
    }

private:
    std::int64_t& at(std::uint32_t j, std::uint32_t w) noexcept { return k_[j * (m_ + 1) + w]; }
    std::uint32_t m_;
    std::vector<std::int64_t> k_;
};

// Fourier coefficients of the non-backtracking walk on the hypercube.
// coeff(t, j) is the transform of z -> p^t(0,z) evaluated on any frequency of
// weight j. Recursion (total probability is conserved, coeff(t,0) = 1):
//   coeff(0,j) = 1,  coeff(1,j) = 1 - 2j/m,
//   coeff(t+1,j) = (m/(m-1)) (1-2j/m) coeff(t,j) - coeff(t-1,j)/(m-1).
// The recursion is validated against exhaustive path enumeration in the test
// suite before anything downstream trusts it.
class NbwSpectrum {
public:
    NbwSpectrum(std::uint32_t m, std::uint32_t tmax) : m_(m) {
        if (m < 2) throw std::invalid_argument("nbw: degree m >= 2 required");
        extend(tmax);
    }

    std::uint32_t m() const noexcept { return m_; }
    std::uint32_t tmax() const noexcept { return static_cast<std::uint32_t>(rows_.size()) - 1; }
    double coeff(std::uint32_t t, std::uint32_t j) const noexcept { return rows_[t][j]; }

    void extend(std::uint32_t new_tmax) {
        if (rows_.empty()) {
            rows_.push_back(std::vector<double>(m_ + 1, 1.0));
            std::vector<double> first(m_ + 1);
            for (std::uint32_t j = 0; j <= m_; ++j) first[j] = 1.0 - 2.0 * j / m_;
            rows_.push_back(std::move(first));
        }
        double ratio = static_cast<double>(m_) / (m_ - 1.0);
        double inv = 1.0 / (m_ - 1.0);
        while (tmax() < new_tmax) {
            const auto& cur = rows_[rows_.size() - 1];
            const auto& prev = rows_[rows_.size() - 2];
            std::vector<double> next(m_ + 1);
            for (std::uint32_t j = 0; j <= m_; ++j)
                next[j] = ratio * (1.0 - 2.0 * j / m_) * cur[j] - inv * prev[j];
            rows_.push_back(std::move(next));
        }
    }

private:
    std::uint32_t m_;
    std::vector<std::vector<double>> rows_;
};

// Inverse transform: p^t(0,z) for any z of Hamming weight w, via
// 2^-m sum_j K[j][w] coeff(t,j) with compensated summation. Cancellation
// beyond tol = 1e-10 * 2^{m/2} signals a broken table rather than a rounding
// artifact and raises.
inline double nbw_transition(const NbwSpectrum& spec, const KrawtchoukTable& kraw,
                             std::uint32_t t, std::uint32_t w) {
    const std::uint32_t m = spec.m();
    if (t > spec.tmax()) throw std::invalid_argument("nbw_transition: t beyond tmax");
    if (w > m) throw std::invalid_argument("nbw_transition: weight beyond m");
    double sum = 0.0, comp = 0.0;
    for (std::uint32_t j = 0; j <= m; ++j) {
        double term = static_cast<double>(kraw(j, w)) * spec.coeff(t, j);
        double y = term - comp;
        double tmp = sum + y;
        comp = (tmp - sum) - y;
        sum = tmp;
    }
    double value = std::ldexp(sum, -static_cast<int>(m));
    double tol = 1e-10 * std::ldexp(1.0, static_cast<int>(m) / 2);
    if (value < -tol || value > 1.0 + tol)
        throw std::runtime_error("nbw_transition: cancellation residue beyond tolerance at t=" +
                                 std::to_string(t) + " w=" + std::to_string(w));
    return std::min(1.0, std::max(0.0, value));
}

// xi-uniform mixing time: least t with
//   max_w (p^t(0,w) + p^{t+1}(0,w)) / 2  <=  (1+xi) / V.
// The two-time average handles bipartite parity. The spectrum is extended on
// demand; a hard cap of 64 m log2(m) guards walks that never uniformize
// (the 4-cycle is a deterministic rotation after the first step).
inline std::uint32_t uniform_mixing_time(NbwSpectrum& spec, const KrawtchoukTable& kraw,
                                         double xi) {
    if (xi <= 0) throw std::invalid_argument("uniform_mixing_time: xi > 0 required");
    const std::uint32_t m = spec.m();
    const double target = (1.0 + xi) * std::ldexp(1.0, -static_cast<int>(m));
    const std::uint32_t cap =
        static_cast<std::uint32_t>(64.0 * m * std::max(1.0, std::log2(static_cast<double>(m))));
    double worst = 0;
    for (std::uint32_t t = 0;; ++t) {
        if (t > cap)
            throw std::runtime_error(
                "uniform_mixing_time: cap " + std::to_string(cap) + " reached at m=" +
                std::to_string(m) + ", xi=" + std::to_string(xi) +
                ", last max=" + std::to_string(worst) + " vs target " + std::to_string(target));
        if (t + 1 > spec.tmax()) spec.extend(std::max(2 * spec.tmax(), t + 8));
        double mx = 0;
        for (std::uint32_t w = 0; w <= m; ++w) {
            double avg = 0.5 * (nbw_transition(spec, kraw, t, w) +
                                nbw_transition(spec, kraw, t + 1, w));
            mx = std::max(mx, avg);
        }
        worst = mx;
        if (mx <= target) return t;
    }
}

struct TriangleSum {
    double total = 0;       // full sum over t1+t2+t3 >= 3, each t_i <= L, at x = y
    double k01_exact = 0;   // exact contribution of the constant frequencies k in {0, all-ones}
    double k01_bound = 0;   // the coarse stand-in 2 L^3 / V for the same frequencies
};

// sum_{u,v} sum_{t1+t2+t3>=3, ti<=L} p^{t1}(x,u) p^{t2}(u,v) p^{t3}(v,x),
// evaluated in Fourier space: V^-1 sum_j C(m,j) [A_j^3 - (low-order triples)]
// with A_j = sum_{t<=L} coeff(t,j).
inline TriangleSum triangle_sum(const NbwSpectrum& spec,
                                [[maybe_unused]] const KrawtchoukTable& kraw, std::uint32_t L) {
    const std::uint32_t m = spec.m();
    if (L > spec.tmax()) throw std::invalid_argument("triangle_sum: L beyond tmax");
    TriangleSum out;
    if (L == 0) return out;
    const double invV = std::ldexp(1.0, -static_cast<int>(m));
    for (std::uint32_t j = 0; j <= m; ++j) {
        double a = 0;
        for (std::uint32_t t = 0; t <= L; ++t) a += spec.coeff(t, j);
        double c1 = spec.coeff(1, j);
        double low = 1.0;
        if (L >= 1) low += 3.0 * c1 + 3.0 * c1 * c1;
        if (L >= 2) low += 3.0 * spec.coeff(2, j);
        double term = static_cast<double>(KrawtchoukTable::binomial(m, j)) * (a * a * a - low);
        out.total += term * invV;
        if (j == 0 || j == m) out.k01_exact += term * invV;
    }
    out.k01_bound = 2.0 * static_cast<double>(L) * L * L * invV;
    return out;
}

struct ConditionReport {
    std::uint32_t m = 0;
    std::uint32_t m0 = 0;     // mixing time used as the walk horizon
    double alpha = 0;
    double p_hat_c = 0;
    double condition2 = 0;    // [p (m-1)]^{m0} - 1
    double condition3 = 0;    // triangle total * log(V) / alpha
    TriangleSum triangle;
};

// Raw condition quantities; no pass/fail, the comparison constants are free.
inline ConditionReport check_conditions(std::uint32_t m, double p_hat_c, double alpha,
                                        std::uint32_t m0) {
    NbwSpectrum spec(m, m0 + 1);
    KrawtchoukTable kraw(m);
    ConditionReport report;
    report.m = m;
    report.m0 = m0;
    report.alpha = alpha;
    report.p_hat_c = p_hat_c;
    report.condition2 = std::pow(p_hat_c * (m - 1.0), static_cast<double>(m0)) - 1.0;
    report.triangle = triangle_sum(spec, kraw, m0);
    report.condition3 = report.triangle.total * (m * std::log(2.0)) / alpha;
    return report;
}

// Exact per-vertex distribution of the walk after t steps, by evolving the
// dense chain on directed edges. Exponential in memory for large graphs;
// meant as the independent check for the Fourier recursion on small m.
inline std::vector<double> nbw_exact_distribution(const TransitiveGraph& g, Vertex start,
                                                  std::uint32_t t) {
    const std::uint64_t n = g.vertex_count();
    const std::uint32_t deg = g.degree();
    if (deg < 2) throw std::invalid_argument("nbw enumeration: degree >= 2 required");
    if (n * deg > (std::uint64_t{1} << 22))
        throw std::invalid_argument("nbw enumeration: graph too large for the dense chain");

    std::vector<Vertex> nbr(n * deg);
    for (Vertex v = 0; v < n; ++v) {
        std::uint32_t slot = 0;
        g.for_each_neighbor(v, [&](Vertex u, EdgeIndex) { nbr[v * deg + slot++] = u; });
    }
    auto reverse_slot = [&](Vertex u, std::uint32_t s) {
        Vertex v = nbr[u * deg + s];
        for (std::uint32_t s2 = 0; s2 < deg; ++s2)
            if (nbr[v * deg + s2] == u) return s2;
        throw std::logic_error("nbw enumeration: adjacency not symmetric");
    };

    std::vector<double> cur(n * deg, 0.0), next(n * deg, 0.0);
    std::vector<double> dist(n, 0.0);
    if (t == 0) {
        dist[start] = 1.0;
        return dist;
    }
    for (std::uint32_t s = 0; s < deg; ++s) cur[start * deg + s] = 1.0 / deg;
    for (std::uint32_t step = 1; step < t; ++step) {
        std::fill(next.begin(), next.end(), 0.0);
        for (Vertex u = 0; u < n; ++u) {
            for (std::uint32_t s = 0; s < deg; ++s) {
                double mass = cur[u * deg + s];
                if (mass == 0.0) continue;
                Vertex v = nbr[u * deg + s];
                std::uint32_t rev = reverse_slot(u, s);
                double share = mass / (deg - 1);
                for (std::uint32_t s2 = 0; s2 < deg; ++s2)
                    if (s2 != rev) next[v * deg + s2] += share;
            }
        }
        cur.swap(next);
    }
    for (Vertex u = 0; u < n; ++u)
        for (std::uint32_t s = 0; s < deg; ++s) dist[nbr[u * deg + s]] += cur[u * deg + s];
    return dist;
}

// One non-backtracking trajectory on an arbitrary regular graph. The first
// step is uniform over all neighbors, later steps uniform over the degree-1
// non-reversing moves.
inline std::vector<Vertex> simulate_nbw(const TransitiveGraph& g, Vertex start,
                                        std::uint32_t steps, std::uint64_t seed) {
    if (g.degree() < 2) throw std::invalid_argument("simulate_nbw: degree >= 2 required");
    if (start >= g.vertex_count()) throw std::invalid_argument("simulate_nbw: bad start");
    std::vector<Vertex> path;
    path.reserve(steps + 1);
    path.push_back(start);
    if (steps == 0) return path;

    CounterRng rng(derive_seed(seed, 0x9b1dULL));
    std::vector<Vertex> nbrs;
    nbrs.reserve(g.degree());
    Vertex cur = start, prev = start;
    bool have_prev = false;
    for (std::uint32_t t = 0; t < steps; ++t) {
        nbrs.clear();
        g.for_each_neighbor(cur, [&](Vertex u, EdgeIndex) { nbrs.push_back(u); });
        std::uint64_t choices = have_prev ? nbrs.size() - 1 : nbrs.size();
        std::uint64_t r = rng.next_below(choices);
        if (have_prev) {
            // skip the reversing move
            std::uint64_t rev = 0;
            while (nbrs[rev] != prev) ++rev;
            if (r >= rev) ++r;
        }
        prev = cur;
        cur = nbrs[r];
        have_prev = true;
        path.push_back(cur);
    }
    return path;
}

}  // namespace percolab
