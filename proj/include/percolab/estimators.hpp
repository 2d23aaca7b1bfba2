#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "percolab/graph.hpp"
#include "percolab/intrinsic.hpp"
#include "percolab/oracle.hpp"
#include "percolab/parallel.hpp"
#include "percolab/percolation.hpp"
#include "percolab/rng.hpp"

namespace percolab {

// Universal Monte Carlo result record.
struct EstimateReport {
    std::string name;
    std::string graph;
    double p = std::nan("");
    double gamma = std::nan("");
    std::vector<std::pair<std::string, double>> params;
    std::uint64_t replicates = 0;
    double mean = 0;
    double std_error = 0;
    std::uint64_t seed = 0;
    double elapsed_s = 0;
};

namespace detail {

inline std::uint64_t tag_hash(const char* name) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char* c = name; *c; ++c) h = (h ^ static_cast<unsigned char>(*c)) * 0x100000001b3ULL;
    return h;
}

inline std::uint64_t replicate_seed(std::uint64_t root, const char* tag, std::uint64_t j) {
    return derive_seed(root, tag_hash(tag), j);
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

inline void mean_stderr(const std::vector<double>& xs, double& mean, double& se) {
    double s = 0;
    for (double x : xs) s += x;
    mean = s / static_cast<double>(xs.size());
    double v = 0;
    for (double x : xs) v += (x - mean) * (x - mean);
    se = xs.size() > 1 ? std::sqrt(v / (static_cast<double>(xs.size()) - 1.0) /
                                   static_cast<double>(xs.size()))
                       : 0.0;
}

inline EstimateReport make_report(const char* name, const TransitiveGraph& g, double p,
                                  const std::vector<double>& samples, std::uint64_t seed,
                                  double elapsed) {
    EstimateReport r;
    r.name = name;
    r.graph = g.spec().to_string();
    r.p = p;
    r.replicates = samples.size();
    mean_stderr(samples, r.mean, r.std_error);
    r.seed = seed;
    r.elapsed_s = elapsed;
    return r;
}

}  // namespace detail

// chi(p) = E|C(0)|, estimated as (sum of squared cluster sizes)/V per
// configuration: by transitivity this per-configuration average over the
// starting vertex is exact, which beats sampling C(0) repeatedly.
inline EstimateReport chi(const TransitiveGraph& g, double p, std::uint64_t replicates,
                          std::uint64_t seed, unsigned workers = 1) {
    if (replicates < 2) throw std::invalid_argument("chi: replicates >= 2");
    detail::Timer timer;
    auto samples = run_replicates<double>(replicates, workers, [&](std::uint64_t j) {
        EdgeRandomness rnd(detail::replicate_seed(seed, "chi", j));
        return decompose(g, rnd, p).sum_sizes_squared() / static_cast<double>(g.vertex_count());
    });
    return detail::make_report("chi", g, p, samples, seed, timer.seconds());
}

// P(|C(0)| >= k); the BFS stops as soon as k vertices are reached.
inline EstimateReport cluster_tail(const TransitiveGraph& g, double p, std::uint64_t k,
                                   std::uint64_t replicates, std::uint64_t seed,
                                   unsigned workers = 1) {
    if (k < 1) throw std::invalid_argument("cluster_tail: k >= 1");
    detail::Timer timer;
    auto samples = run_replicates<double>(replicates, workers, [&](std::uint64_t j) {
        EdgeRandomness rnd(detail::replicate_seed(seed, "tail", j));
        return cluster_of(g, rnd, p, 0, k) >= k ? 1.0 : 0.0;
    });
    auto r = detail::make_report("tail", g, p, samples, seed, timer.seconds());
    r.params.emplace_back("k", static_cast<double>(k));
    return r;
}

// P(the shell at intrinsic distance exactly r from the origin is non-empty).
inline EstimateReport survival_probability(const TransitiveGraph& g, double p, std::uint32_t r,
                                           std::uint64_t replicates, std::uint64_t seed,
                                           unsigned workers = 1) {
    if (r < 1) throw std::invalid_argument("survival_probability: r >= 1");
    detail::Timer timer;
    auto samples = run_replicates<double>(replicates, workers, [&](std::uint64_t j) {
        EdgeRandomness rnd(detail::replicate_seed(seed, "survival", j));
        return survival_event(g, rnd, p, 0, r) ? 1.0 : 0.0;
    });
    auto rep = detail::make_report("survival", g, p, samples, seed, timer.seconds());
    rep.params.emplace_back("r", static_cast<double>(r));
    return rep;
}

struct LevelStat {
    double mean = 0;
    double std_error = 0;
};

struct BallVolumeReport {
    std::string graph;
    double p = 0;
    std::uint32_t radius = 0;
    std::uint64_t replicates = 0;
    std::uint64_t seed = 0;
    double elapsed_s = 0;
    std::vector<LevelStat> shell;       // E|dB(t)|
    std::vector<LevelStat> cumulative;  // E|B(t)|
};

inline BallVolumeReport ball_volumes(const TransitiveGraph& g, double p, std::uint32_t r,
                                     std::uint64_t replicates, std::uint64_t seed,
                                     unsigned workers = 1) {
    if (replicates < 2) throw std::invalid_argument("ball_volumes: replicates >= 2");
    detail::Timer timer;
    auto per_rep = run_replicates<std::vector<double>>(replicates, workers, [&](std::uint64_t j) {
        EdgeRandomness rnd(detail::replicate_seed(seed, "ball", j));
        BallProfile profile = ball(g, rnd, p, 0, r);
        std::vector<double> sizes(r + 1, 0.0);
        for (std::uint32_t t = 0; t <= r; ++t) sizes[t] = static_cast<double>(profile.shell_sizes[t]);
        return sizes;
    });
    BallVolumeReport report;
    report.graph = g.spec().to_string();
    report.p = p;
    report.radius = r;
    report.replicates = replicates;
    report.seed = seed;
    report.shell.resize(r + 1);
    report.cumulative.resize(r + 1);
    std::vector<double> column(replicates);
    std::vector<double> running(replicates, 0.0);
    for (std::uint32_t t = 0; t <= r; ++t) {
        for (std::uint64_t j = 0; j < replicates; ++j) {
            column[j] = per_rep[j][t];
            running[j] += per_rep[j][t];
        }
        detail::mean_stderr(column, report.shell[t].mean, report.shell[t].std_error);
        detail::mean_stderr(running, report.cumulative[t].mean, report.cumulative[t].std_error);
    }
    report.elapsed_s = timer.seconds();
    return report;
}

// Triangle diagram nabla(x,y) = sum_{u,v} tau(x,u) tau(u,v) tau(v,y),
// estimated from three independent configurations per replicate:
//   count (u,v) with u in C_1(x), v in C_2(u), v in C_3(y)
// = sum over u in C_1(x) of |C_2(u) /\ C_3(y)|, grouped through the layer-2
// decomposition. Unbiased because the three tau factors are independent.
inline EstimateReport triangle_diagram(const TransitiveGraph& g, double p, Vertex x, Vertex y,
                                       std::uint64_t replicates, std::uint64_t seed,
                                       unsigned workers = 1, double cost_cap = 1e12) {
    if (replicates < 2) throw std::invalid_argument("triangle_diagram: replicates >= 2");
    detail::Timer timer;
    auto samples = run_replicates<double>(replicates, workers, [&](std::uint64_t j) {
        std::uint64_t base = detail::replicate_seed(seed, "triangle", j);
        EdgeRandomness w1(derive_seed(base, 1)), w2(derive_seed(base, 2)),
            w3(derive_seed(base, 3));
        std::vector<Vertex> cx, cy;
        cluster_of(g, w1, p, x, 0, &cx);
        cluster_of(g, w3, p, y, 0, &cy);
        if (static_cast<double>(cx.size()) * static_cast<double>(cy.size()) > cost_cap)
            return std::nan("");  // aborted, flagged below
        ClusterDecomposition mid = decompose(g, w2, p);
        std::unordered_map<std::uint32_t, double> weight_by_component;
        for (Vertex v : cy) weight_by_component[mid.component_of(v)] += 1.0;
        double total = 0;
        for (Vertex u : cx) {
            auto it = weight_by_component.find(mid.component_of(u));
            if (it != weight_by_component.end()) total += it->second;
        }
        return total;
    });
    std::vector<double> kept;
    kept.reserve(samples.size());
    std::uint64_t aborted = 0;
    for (double s : samples) {
        if (std::isnan(s)) ++aborted;
        else kept.push_back(s);
    }
    if (kept.size() < 2) throw std::runtime_error("triangle_diagram: too many aborted replicates");
    auto r = detail::make_report("triangle", g, p, kept, seed, timer.seconds());
    r.params.emplace_back("aborted", static_cast<double>(aborted));
    r.params.emplace_back("x", static_cast<double>(x));
    r.params.emplace_back("y", static_cast<double>(y));
    return r;
}

struct MagnetizationPoint {
    double p = 0;
    double gamma = 0;
    double value = 0;
    double std_error = 0;
    enum class Method { MonteCarlo, ExactEnumeration } method = Method::MonteCarlo;
};

// M(p,gamma): probability that C(0) contains a green vertex under independent
// gamma-coloring. Per replicate the green sampling is integrated out exactly:
// given |C(0)| = k the conditional hit probability is 1-(1-gamma)^k.
inline MagnetizationPoint magnetization(const TransitiveGraph& g, double p, double gamma,
                                        std::uint64_t replicates, std::uint64_t seed,
                                        unsigned workers = 1) {
    if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("magnetization: gamma in [0,1]");
    auto samples = run_replicates<double>(replicates, workers, [&](std::uint64_t j) {
        EdgeRandomness rnd(detail::replicate_seed(seed, "magnetization", j));
        double k = static_cast<double>(cluster_of(g, rnd, p, 0));
        return -std::expm1(k * std::log1p(-gamma));  // 1-(1-gamma)^k, stable for tiny gamma
    });
    MagnetizationPoint point;
    point.p = p;
    point.gamma = gamma;
    detail::mean_stderr(samples, point.value, point.std_error);
    return point;
}

struct ExactOracleResult {
    MagnetizationPoint magnetization;
    std::vector<double> cluster_law;  // P(|C(0)| = k), index k
    double chi = 0;
};

inline ExactOracleResult exact_small_oracle(const TransitiveGraph& g, double p, double gamma) {
    SmallGraphOracle oracle(g);
    ExactOracleResult result;
    result.cluster_law = oracle.cluster_law(p);
    result.chi = oracle.chi(p);
    result.magnetization.p = p;
    result.magnetization.gamma = gamma;
    result.magnetization.value = oracle.magnetization(p, gamma);
    result.magnetization.method = MagnetizationPoint::Method::ExactEnumeration;
    return result;
}

struct PcEstimate {
    double lambda = 0;
    double target = 0;  // lambda V^{1/3}
    double p_lo = 0, p_hi = 0, p_hat = 0;
    double chi_lo = 0, chi_hi = 0;
    double z_lo = 0, z_hi = 0;  // (coupled chi mean - target) / stderr at the bracket ends
    std::uint64_t probes = 0;
    EstimateReport chi_at_p_hat;
};

// Bisection of the coupled susceptibility curve against lambda V^{1/3}. One
// EdgeRandomness per replicate is reused for every probe, so the empirical
// mean curve inherits the exact monotonicity of the coupling and bisection is
// well-posed. Fresh seeds mid-search would break that and are not offered.
inline PcEstimate estimate_pc(const TransitiveGraph& g, double lambda, double tolerance,
                              std::uint64_t replicates, std::uint64_t seed, unsigned workers = 1) {
    if (lambda <= 0) throw std::invalid_argument("estimate_pc: lambda > 0");
    if (tolerance <= 0) throw std::invalid_argument("estimate_pc: tolerance > 0");
    if (replicates < 2) throw std::invalid_argument("estimate_pc: replicates >= 2");
    const double V = static_cast<double>(g.vertex_count());
    const double target = lambda * std::cbrt(V);
    if (target > V) throw std::invalid_argument("estimate_pc: target above V, unreachable");
    if (target < 1.0) throw std::invalid_argument("estimate_pc: target below 1, unreachable");

    detail::Timer timer;
    std::vector<std::uint64_t> rep_seeds(replicates);
    for (std::uint64_t j = 0; j < replicates; ++j)
        rep_seeds[j] = detail::replicate_seed(seed, "pc", j);

    std::uint64_t probes = 0;
    auto chi_samples = [&](double p) {
        ++probes;
        return run_replicates<double>(replicates, workers, [&](std::uint64_t j) {
            EdgeRandomness rnd(rep_seeds[j]);
            return decompose(g, rnd, p).sum_sizes_squared() / V;
        });
    };
    auto mean_of = [](const std::vector<double>& xs) {
        double m, se;
        detail::mean_stderr(xs, m, se);
        return std::pair<double, double>(m, se);
    };

    double lo = 0.0, chi_lo_mean = 1.0, chi_lo_se = 0.0;  // chi(0) = 1 exactly
    double hi = std::min(1.0, 2.0 / static_cast<double>(g.degree()));
    std::vector<double> hi_samples = chi_samples(hi);
    auto [chi_hi_mean, chi_hi_se] = mean_of(hi_samples);
    while (chi_hi_mean <= target && hi < 1.0) {
        lo = hi;
        chi_lo_mean = chi_hi_mean;
        chi_lo_se = chi_hi_se;
        hi = std::min(1.0, hi * 1.5 + 0.05 * (1.0 - hi));
        std::tie(chi_hi_mean, chi_hi_se) = mean_of(chi_samples(hi));
    }
    if (chi_hi_mean <= target)
        throw std::runtime_error("estimate_pc: susceptibility never reaches target");

    while (hi - lo > tolerance) {
        double mid = 0.5 * (lo + hi);
        auto [cm, cs] = mean_of(chi_samples(mid));
        if (cm >= target) {
            hi = mid;
            chi_hi_mean = cm;
            chi_hi_se = cs;
        } else {
            lo = mid;
            chi_lo_mean = cm;
            chi_lo_se = cs;
        }
    }

    PcEstimate est;
    est.lambda = lambda;
    est.target = target;
    est.p_lo = lo;
    est.p_hi = hi;
    est.p_hat = 0.5 * (lo + hi);
    est.chi_lo = chi_lo_mean;
    est.chi_hi = chi_hi_mean;
    est.z_lo = chi_lo_se > 0 ? (chi_lo_mean - target) / chi_lo_se : -HUGE_VAL;
    est.z_hi = chi_hi_se > 0 ? (chi_hi_mean - target) / chi_hi_se : HUGE_VAL;
    est.probes = probes;
    auto final_samples = chi_samples(est.p_hat);
    est.chi_at_p_hat = detail::make_report("chi", g, est.p_hat, final_samples, seed, 0.0);
    est.chi_at_p_hat.elapsed_s = timer.seconds();
    est.chi_at_p_hat.params.emplace_back("lambda", lambda);
    return est;
}

}  // namespace percolab
