#pragma once

// The paper-checks suite: thirteen pinned acceptance experiments, each with a
// fixed seed, fixed scale, and a tolerance band frozen in code. Shared by the
// `percolab suite` subcommand and the acceptance test binary.

#include <bit>
#include <cinttypes>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "percolab/estimators.hpp"
#include "percolab/graph.hpp"
#include "percolab/intrinsic.hpp"
#include "percolab/nbw.hpp"
#include "percolab/oracle.hpp"
#include "percolab/percolation.hpp"
#include "percolab/sprinkling.hpp"

namespace percolab {

struct CriterionResult {
    std::string id;
    std::string name;
    bool pass = false;
    std::string details;
    double elapsed_s = 0;
};

struct SuiteOptions {
    std::uint64_t seed = 20250810;
    unsigned workers = 2;
    std::string only;  // run a single criterion id when non-empty
};

namespace checks_detail {

inline std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof buf, pattern, args);
    va_end(args);
    return buf;
}

inline std::uint64_t case_tag(const std::string& s, double p) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
    return mix64(h ^ static_cast<std::uint64_t>(p * 1e6));
}

inline bool connected_in_sample(const TransitiveGraph& g, const EdgeRandomness& rnd, double p,
                                Vertex a, Vertex b) {
    std::vector<Vertex> members;
    cluster_of(g, rnd, p, a, 0, &members);
    for (Vertex v : members)
        if (v == b) return true;
    return false;
}

struct Check {
    bool pass = true;
    std::string first_failure;
    int total = 0;

    void expect(bool ok, const std::string& what) {
        ++total;
        if (!ok && pass) {
            pass = false;
            first_failure = what;
        }
    }
};

}  // namespace checks_detail

// C01: Monte Carlo estimators against exhaustive enumeration on the 4-cycle,
// the 3-cube and K4, within four standard errors.
inline CriterionResult criterion_engine_oracle(const SuiteOptions& opt) {
    using namespace checks_detail;
    detail::Timer timer;
    Check check;
    const std::vector<std::pair<GraphSpec, Vertex>> cases = {
        {GraphSpec::hypercube(2), 3}, {GraphSpec::hypercube(3), 7}, {GraphSpec::complete(4), 1}};
    const std::vector<double> ps = {0.2, 0.5, 0.8};
    const std::vector<double> gammas = {0.1, 0.5};
    const std::uint64_t reps = 40000;
    for (const auto& [spec, far] : cases) {
        TransitiveGraph g(spec);
        SmallGraphOracle oracle(g);
        for (double p : ps) {
            std::uint64_t seed =
                derive_seed(opt.seed, detail::tag_hash("c01"), case_tag(spec.to_string(), p));
            // two-point
            double exact_t = oracle.connection_probability(p, 0, far);
            double hits = 0;
            for (std::uint64_t j = 0; j < reps; ++j) {
                EdgeRandomness rnd(derive_seed(seed, 1, j));
                if (connected_in_sample(g, rnd, p, 0, far)) hits += 1;
            }
            double mc_t = hits / reps;
            double se_t = std::sqrt(std::max(mc_t * (1 - mc_t), 1e-12) / reps);
            check.expect(std::abs(mc_t - exact_t) <= 4 * se_t,
                         fmt("%s p=%.1f connect: mc=%.5f exact=%.5f se=%.5f",
                             spec.to_string().c_str(), p, mc_t, exact_t, se_t));
            // susceptibility
            auto chi_rep = chi(g, p, reps, derive_seed(seed, 2), opt.workers);
            check.expect(std::abs(chi_rep.mean - oracle.chi(p)) <= 4 * chi_rep.std_error,
                         fmt("%s p=%.1f chi: mc=%.5f exact=%.5f se=%.5f",
                             spec.to_string().c_str(), p, chi_rep.mean, oracle.chi(p),
                             chi_rep.std_error));
            // magnetization
            for (double gamma : gammas) {
                auto mag = magnetization(g, p, gamma, reps, derive_seed(seed, 3), opt.workers);
                double exact_m = oracle.magnetization(p, gamma);
                check.expect(std::abs(mag.value - exact_m) <= 4 * mag.std_error,
                             fmt("%s p=%.1f g=%.1f M: mc=%.5f exact=%.5f se=%.5f",
                                 spec.to_string().c_str(), p, gamma, mag.value, exact_m,
                                 mag.std_error));
            }
            // triangle diagram at the origin
            auto tri = triangle_diagram(g, p, 0, 0, reps / 2, derive_seed(seed, 4), opt.workers);
            double exact_n = oracle.nabla(p, 0, 0);
            check.expect(std::abs(tri.mean - exact_n) <= 4 * tri.std_error,
                         fmt("%s p=%.1f nabla: mc=%.5f exact=%.5f se=%.5f",
                             spec.to_string().c_str(), p, tri.mean, exact_n, tri.std_error));
        }
    }
    std::string details = check.pass ? fmt("%d comparisons within 4 stderr", check.total)
                                     : check.first_failure;
    return {"C01", "engine-oracle-equivalence", check.pass, details, timer.seconds()};
}

// C02: Erdos-Renyi cross-check at p = 1.1/n on the complete graph with 1e5
// vertices; asymptotic prediction |C1| / (2 eps n) -> 1.
inline CriterionResult criterion_er_giant(const SuiteOptions& opt) {
    using namespace checks_detail;
    detail::Timer timer;
    const std::uint64_t n = 100000;
    const double eps = 0.1;
    TransitiveGraph g(GraphSpec::complete(n));
    const double p = (1.0 + eps) / static_cast<double>(n);
    const std::uint64_t seeds = 20;
    auto ratios = run_replicates<double>(seeds, opt.workers, [&](std::uint64_t j) {
        EdgeRandomness rnd(detail::replicate_seed(opt.seed, "c02", j));
        auto decomp = decompose(g, rnd, p);
        return static_cast<double>(decomp.largest()) / (2.0 * eps * static_cast<double>(n));
    });
    double mean, se;
    detail::mean_stderr(ratios, mean, se);
    bool pass = mean >= 0.9 && mean <= 1.1;
    // the exact giant fraction at finite eps: gamma solving g = 1 - exp(-(1+eps) g)
    double gamma_exact = 2 * eps;
    for (int i = 0; i < 200; ++i) gamma_exact = 1.0 - std::exp(-(1.0 + eps) * gamma_exact);
    return {"C02", "er-giant-cross-check", pass,
            fmt("mean |C1|/(2 eps n) = %.4f +- %.4f, band [0.9, 1.1]; exact finite-eps "
                "giant gives %.4f",
                mean, se, gamma_exact / (2 * eps)),
            timer.seconds()};
}

struct GiantStats {
    double ratio_mean = 0, ratio_se = 0;
    double c2_over_c1 = 0;
    double chi_ratio = 0;
};

inline GiantStats giant_stats(const SuiteOptions& opt, const char* tag, std::uint32_t m,
                              double eps, std::uint64_t seeds) {
    TransitiveGraph g(GraphSpec::hypercube(m));
    const double p = TransitiveGraph::hypercube_pc_reference(m) * (1.0 + eps);
    const double v = static_cast<double>(g.vertex_count());
    struct Per {
        double ratio, c2c1, chi;
    };
    auto per = run_replicates<Per>(seeds, opt.workers, [&](std::uint64_t j) {
        EdgeRandomness rnd(detail::replicate_seed(opt.seed, tag, j));
        auto d = decompose(g, rnd, p);
        Per out;
        out.ratio = static_cast<double>(d.largest()) / (2.0 * eps * v);
        out.c2c1 = static_cast<double>(d.second_largest()) / static_cast<double>(d.largest());
        out.chi = d.sum_sizes_squared() / v;
        return out;
    });
    std::vector<double> ratios, c2c1s, chis;
    for (const auto& s : per) {
        ratios.push_back(s.ratio);
        c2c1s.push_back(s.c2c1);
        chis.push_back(s.chi);
    }
    GiantStats out;
    detail::mean_stderr(ratios, out.ratio_mean, out.ratio_se);
    double cm, cse, xm, xse;
    detail::mean_stderr(c2c1s, cm, cse);
    detail::mean_stderr(chis, xm, xse);
    out.c2_over_c1 = cm;
    out.chi_ratio = xm / (4.0 * eps * eps * v);
    return out;
}

// C03: giant component on the 20-cube at the reference critical point times
// (1 + eps): |C1|/(2 eps V) in [0.8, 1.2] and C2/C1 <= 0.15.
inline CriterionResult criterion_giant_component(const SuiteOptions& opt) {
    using namespace checks_detail;
    detail::Timer timer;
    auto stats = giant_stats(opt, "c03", 20, 0.1, 20);
    bool pass = stats.ratio_mean >= 0.8 && stats.ratio_mean <= 1.2 && stats.c2_over_c1 <= 0.15;
    return {"C03", "giant-component", pass,
            fmt("mean |C1|/(2 eps V) = %.4f +- %.4f (band [0.8,1.2]); mean C2/C1 = %.4f "
                "(<= 0.15)",
                stats.ratio_mean, stats.ratio_se, stats.c2_over_c1),
            timer.seconds()};
}

// C04: susceptibility at the same point: chi / (4 eps^2 V) in [0.75, 1.25].
inline CriterionResult criterion_susceptibility(const SuiteOptions& opt) {
    using namespace checks_detail;
    detail::Timer timer;
    auto stats = giant_stats(opt, "c04", 20, 0.1, 20);
    bool pass = stats.chi_ratio >= 0.75 && stats.chi_ratio <= 1.25;
    return {"C04", "susceptibility", pass,
            fmt("chi/(4 eps^2 V) = %.4f (band [0.75,1.25])", stats.chi_ratio), timer.seconds()};
}

// C05: supercritical cluster tail P(|C(0)| >= k0) with
// k0 = ceil(eps^-2 (eps^3 V)^{1/4}) lands in [1.5 eps, 2.5 eps].
inline CriterionResult criterion_cluster_tail(const SuiteOptions& opt) {
    using namespace checks_detail;
    detail::Timer timer;
    const std::uint32_t m = 20;
    const double eps = 0.1;
    TransitiveGraph g(GraphSpec::hypercube(m));
    const double p = TransitiveGraph::hypercube_pc_reference(m) * (1.0 + eps);
    const double v = static_cast<double>(g.vertex_count());
    const std::uint64_t k0 = static_cast<std::uint64_t>(
        std::ceil(std::pow(eps * eps * eps * v, 0.25) / (eps * eps)));
    auto rep = cluster_tail(g, p, k0, 800, derive_seed(opt.seed, detail::tag_hash("c05")),
                            opt.workers);
    bool pass = rep.mean >= 1.5 * eps && rep.mean <= 2.5 * eps;
    return {"C05", "cluster-tail", pass,
            fmt("P(|C(0)| >= %" PRIu64 ") = %.4f +- %.4f (band [%.3f, %.3f])", k0, rep.mean,
                rep.std_error, 1.5 * eps, 2.5 * eps),
            timer.seconds()};
}

// C06: the p_c expansion test as specified: lambda = 0.1 bisection against
// 0.1 V^{1/3} for m in {14,...,22}, then (p_hat - 1/(m-1)) m^3 in [2, 5].
// At these sizes the lambda = 0.1 target sits about (1/lambda) scaling-window
// widths below the critical point (window width V^{-1/3} >> m^-3 here), so
// the measured values are large and negative; they converge toward the m^-3
// coefficient only as 2^{m/3} outgrows m^3. The criterion is evaluated
// faithfully and is expected to fail at desk scale; the details record the
// full sequence.
inline CriterionResult criterion_pc_expansion(const SuiteOptions& opt) {
    using namespace checks_detail;
    detail::Timer timer;
    std::string seq;
    bool in_band = true;
    std::vector<double> values;
    for (std::uint32_t m : {14u, 16u, 18u, 20u, 22u}) {
        TransitiveGraph g(GraphSpec::hypercube(m));
        auto est = estimate_pc(g, 0.1, 2e-5, 12,
                               derive_seed(opt.seed, detail::tag_hash("c06"), m), opt.workers);
        double md = m;
        double value = (est.p_hat - 1.0 / (md - 1.0)) * md * md * md;
        values.push_back(value);
        in_band = in_band && value >= 2.0 && value <= 5.0;
        seq += fmt("m=%u:%.2f ", m, value);
    }
    bool diverging = true;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (std::abs(values[i]) <= std::abs(values[i - 1])) diverging = false;
    bool pass = in_band && !diverging;
    return {"C06", "pc-expansion", pass,
            fmt("(p_hat - 1/(m-1)) m^3 = %s(band [2,5]%s)", seq.c_str(),
                diverging ? ", diverging" : ""),
            timer.seconds()};
}

// C07: NBW exactness: p^2(0,0) = 0 and p^4(0,0) = 1/(m-1)^2 to 1e-10; the
// Fourier recursion equals dense path enumeration to 1e-12 for m <= 4; the
// trajectory simulator matches the spectrum within four standard errors.
inline CriterionResult criterion_nbw_exactness(const SuiteOptions& opt) {
    using namespace checks_detail;
    detail::Timer timer;
    Check check;
    for (std::uint32_t m = 3; m <= 20; ++m) {
        NbwSpectrum spec(m, 4);
        KrawtchoukTable kraw(m);
        double p2 = nbw_transition(spec, kraw, 2, 0);
        double p4 = nbw_transition(spec, kraw, 4, 0);
        double expect4 = 1.0 / ((m - 1.0) * (m - 1.0));
        check.expect(std::abs(p2) <= 1e-10, fmt("m=%u p2(0,0)=%.3e", m, p2));
        check.expect(std::abs(p4 - expect4) <= 1e-10,
                     fmt("m=%u p4(0,0)=%.12f expect %.12f", m, p4, expect4));
    }
    for (std::uint32_t m = 2; m <= 4; ++m) {
        TransitiveGraph g(GraphSpec::hypercube(m));
        NbwSpectrum spec(m, 6);
        KrawtchoukTable kraw(m);
        for (std::uint32_t t = 0; t <= 6; ++t) {
            auto dense = nbw_exact_distribution(g, 0, t);
            for (std::uint32_t w = 0; w <= m; ++w) {
                // any vertex of weight w; build one
                Vertex z = (std::uint64_t{1} << w) - 1;
                double err = std::abs(dense[z] - nbw_transition(spec, kraw, t, w));
                check.expect(err <= 1e-12, fmt("m=%u t=%u w=%u enum err=%.3e", m, t, w, err));
            }
        }
    }
    {
        const std::uint32_t m = 10, tmax = 20;
        const std::uint64_t walks = 1000000;
        TransitiveGraph g(GraphSpec::hypercube(m));
        NbwSpectrum spec(m, tmax);
        KrawtchoukTable kraw(m);
        std::vector<std::vector<std::uint64_t>> counts(tmax + 1,
                                                       std::vector<std::uint64_t>(m + 1, 0));
        std::uint64_t base = derive_seed(opt.seed, detail::tag_hash("c07"));
        for (std::uint64_t wk = 0; wk < walks; ++wk) {
            auto path = simulate_nbw(g, 0, tmax, derive_seed(base, wk));
            for (std::uint32_t t = 0; t <= tmax; ++t)
                ++counts[t][std::popcount(path[t])];
        }
        for (std::uint32_t t = 1; t <= tmax; ++t) {
            for (std::uint32_t w = 0; w <= m; ++w) {
                double expect =
                    static_cast<double>(KrawtchoukTable::binomial(m, w)) *
                    nbw_transition(spec, kraw, t, w);
                double got = static_cast<double>(counts[t][w]) / static_cast<double>(walks);
                double se = std::sqrt(std::max(expect * (1 - expect), 1e-12 / walks) /
                                      static_cast<double>(walks));
                check.expect(std::abs(got - expect) <= 4 * se,
                             fmt("sim t=%u w=%u got=%.5f expect=%.5f se=%.6f", t, w, got,
                                 expect, se));
            }
        }
    }
    std::string details =
        check.pass ? fmt("%d exactness comparisons passed", check.total) : check.first_failure;
    return {"C07", "nbw-exactness", check.pass, details, timer.seconds()};
}

// C08: uniform mixing time at xi = log(m)/m scales like m log m:
// max over m in {8..20} of T/(m ln m) <= 3.
inline CriterionResult criterion_mixing_scaling(const SuiteOptions&) {
    using namespace checks_detail;
    detail::Timer timer;
    double worst = 0;
    std::string seq;
    for (std::uint32_t m = 8; m <= 20; ++m) {
        NbwSpectrum spec(m, 16);
        KrawtchoukTable kraw(m);
        double xi = std::log(static_cast<double>(m)) / m;
        std::uint32_t t = uniform_mixing_time(spec, kraw, xi);
        double ratio = t / (m * std::log(static_cast<double>(m)));
        worst = std::max(worst, ratio);
        seq += fmt("%u:%u ", m, t);
    }
    bool pass = worst <= 3.0;
    return {"C08", "mixing-time-scaling", pass,
            fmt("T(m): %smax T/(m ln m) = %.3f (<= 3)", seq.c_str(), worst), timer.seconds()};
}

// C09: the NBW triangle sum obeys S <= 2 L^3/V + 10/m^2 at L = ceil(m ln m):
// the constant-frequency mass is covered by the 2 L^3/V term and the rest is
// required to be O(1/m^2) with constant at most 10.
inline CriterionResult criterion_nbw_triangle(const SuiteOptions&) {
    using namespace checks_detail;
    detail::Timer timer;
    bool pass = true;
    std::string seq;
    for (std::uint32_t m : {12u, 16u, 20u}) {
        std::uint32_t ell =
            static_cast<std::uint32_t>(std::ceil(m * std::log(static_cast<double>(m))));
        NbwSpectrum spec(m, ell);
        KrawtchoukTable kraw(m);
        auto tri = triangle_sum(spec, kraw, ell);
        double bounded = (tri.total - tri.k01_bound) * m * m;
        double remainder = (tri.total - tri.k01_exact) * m * m;
        pass = pass && bounded <= 10.0;
        seq += fmt("m=%u:(S-2L^3/V)m^2=%.1f,remainder*m^2=%.1f ", m, bounded, remainder);
    }
    return {"C09", "nbw-triangle-sum", pass, seq + "(upper band 10)", timer.seconds()};
}

// C10: magnetization bounds on the 18-cube at the reference critical point:
// M(p_c, gamma) <= 1.3 sqrt(2 gamma) for gamma in {1e-4, 1e-3}; boundary
// values M(p,0) = 0 and M(p,1) = 1 are exact.
inline CriterionResult criterion_magnetization(const SuiteOptions& opt) {
    using namespace checks_detail;
    detail::Timer timer;
    const std::uint32_t m = 18;
    TransitiveGraph g(GraphSpec::hypercube(m));
    const double p = TransitiveGraph::hypercube_pc_reference(m);
    Check check;
    std::string measured;
    for (double gamma : {1e-4, 1e-3}) {
        auto point = magnetization(g, p, gamma, 20000,
                                   derive_seed(opt.seed, detail::tag_hash("c10"),
                                               static_cast<std::uint64_t>(gamma * 1e9)),
                                   opt.workers);
        double bound = 1.3 * std::sqrt(2.0 * gamma);
        check.expect(point.value <= bound, fmt("gamma=%.0e M=%.5f bound=%.5f", gamma,
                                               point.value, bound));
        measured += fmt("M(%.0e)=%.5f<=%.5f ", gamma, point.value, bound);
    }
    auto zero = magnetization(g, p, 0.0, 50, derive_seed(opt.seed, 0xc10), 1);
    auto one = magnetization(g, p, 1.0, 50, derive_seed(opt.seed, 0xc10), 1);
    check.expect(zero.value == 0.0, "M(p,0) != 0");
    check.expect(one.value == 1.0, "M(p,1) != 1");
    return {"C10", "magnetization-bounds", check.pass,
            check.pass ? measured + "boundaries exact" : check.first_failure, timer.seconds()};
}

// C11: the three magnetization differential inequalities hold with slack
// >= -1e-8 on the full 9x9 grid for the 2- and 3-cube exact oracles.
inline CriterionResult criterion_differential_inequalities(const SuiteOptions&) {
    using namespace checks_detail;
    detail::Timer timer;
    Check check;
    std::vector<double> grid;
    for (int i = 1; i <= 9; ++i) grid.push_back(i / 10.0);
    double worst = HUGE_VAL;
    for (std::uint32_t m : {2u, 3u}) {
        TransitiveGraph g(GraphSpec::hypercube(m));
        SmallGraphOracle oracle(g);
        auto points = check_differential_inequalities(oracle, g.degree(), grid, grid);
        for (const auto& pt : points) {
            double s = std::min(pt.slack1, std::min(pt.slack2, pt.slack3));
            worst = std::min(worst, s);
            check.expect(s >= -1e-8, fmt("m=%u p=%.1f gamma=%.1f slacks %.2e %.2e %.2e", m,
                                         pt.p, pt.gamma, pt.slack1, pt.slack2, pt.slack3));
            check.expect(pt.fd_residual <= 1e-6,
                         fmt("m=%u p=%.1f gamma=%.1f fd residual %.2e", m, pt.p, pt.gamma,
                             pt.fd_residual));
        }
    }
    return {"C11", "differential-inequalities", check.pass,
            check.pass ? fmt("162 grid points, worst slack %.2e >= -1e-8", worst)
                       : check.first_failure,
            timer.seconds()};
}

// C12: two-round sprinkling on the 20-cube with eps = 0.1, theta = 0.05.
// merge_fraction >= 1 - 3 theta in at least 90% of 50 seeded runs, and the
// pooled union edge density matches p within four binomial standard errors.
inline CriterionResult criterion_sprinkling(const SuiteOptions& opt) {
    using namespace checks_detail;
    detail::Timer timer;
    const std::uint32_t m = 20;
    const double eps = 0.1, theta = 0.05;
    TransitiveGraph g(GraphSpec::hypercube(m));
    SprinklePlan plan = sprinkle_plan(g, TransitiveGraph::hypercube_pc_reference(m), eps, theta);
    const std::uint64_t runs = 50;
    auto outcomes = run_replicates<SprinkleOutcome>(runs, opt.workers, [&](std::uint64_t j) {
        return sprinkle_run(g, plan, detail::replicate_seed(opt.seed, "c12", j));
    });
    std::uint64_t merged = 0, open_total = 0;
    for (const auto& out : outcomes) {
        if (out.merge_fraction >= 1.0 - 3.0 * theta) ++merged;
        open_total += out.union_open_edges;
    }
    double frac = static_cast<double>(merged) / runs;
    double density = static_cast<double>(open_total) /
                     (static_cast<double>(runs) * static_cast<double>(g.edge_count()));
    double se = std::sqrt(plan.p * (1 - plan.p) /
                          (static_cast<double>(runs) * static_cast<double>(g.edge_count())));
    bool density_ok = std::abs(density - plan.p) <= 4 * se;
    bool pass = frac >= 0.9 && density_ok;
    return {"C12", "sprinkling", pass,
            fmt("merge_fraction >= %.2f in %.0f%% of runs (need 90%%); pooled density %.7f vs "
                "p %.7f (|z| = %.2f)",
                1.0 - 3.0 * theta, 100.0 * frac, density, plan.p,
                std::abs(density - plan.p) / se),
            timer.seconds()};
}

// C13: property battery: coupling refinement, sweep/decompose agreement,
// Krawtchouk orthogonality, NBW mass/parity/bound, worker-count determinism,
// and the edge-value frequency sanity check.
inline CriterionResult criterion_properties(const SuiteOptions& opt) {
    using namespace checks_detail;
    detail::Timer timer;
    Check check;

    // coupling refinement: p1-clusters refine p2-clusters on shared randomness
    for (const auto& spec :
         {GraphSpec::hypercube(8), GraphSpec::hamming(4, 3), GraphSpec::torus(5, 3),
          GraphSpec::complete(30), GraphSpec::random_regular(256, 6, 9)}) {
        TransitiveGraph g(spec);
        for (std::uint64_t s = 0; s < 3; ++s) {
            EdgeRandomness rnd(derive_seed(opt.seed, 0x13a, s));
            auto d1 = decompose(g, rnd, 0.25);
            auto d2 = decompose(g, rnd, 0.6);
            std::vector<std::int64_t> image(g.vertex_count(), -1);
            bool ok = true;
            for (Vertex v = 0; v < g.vertex_count() && ok; ++v) {
                auto& slot = image[d1.component_of(v)];
                if (slot < 0) slot = d2.component_of(v);
                else ok = slot == d2.component_of(v);
            }
            check.expect(ok, "refinement violated: " + spec.to_string());
        }
    }

    // sweep equals decompose at the grid points
    {
        TransitiveGraph g(GraphSpec::hypercube(10));
        EdgeRandomness rnd(derive_seed(opt.seed, 0x13b));
        auto curve = sweep(g, rnd, {0.3, 0.7}, {4, 64}, true);
        for (std::size_t i = 0; i < curve.at_grid.size(); ++i) {
            const auto& pt = curve.at_grid[i];
            auto d = decompose(g, rnd, pt.p);
            check.expect(pt.sum_sizes_squared == d.sum_sizes_squared(), "sweep sum_sq mismatch");
            check.expect(pt.largest == d.largest(), "sweep C1 mismatch");
            check.expect(pt.second_largest == d.second_largest(), "sweep C2 mismatch");
            check.expect(pt.z_at_least[0] == count_at_least(d, 4), "sweep Z4 mismatch");
            check.expect(pt.z_at_least[1] == count_at_least(d, 64), "sweep Z64 mismatch");
        }
        for (std::size_t i = 1; i < curve.trace.size(); ++i) {
            check.expect(curve.trace[i].sum_sizes_squared >= curve.trace[i - 1].sum_sizes_squared,
                         "trace sum_sq not monotone");
            check.expect(curve.trace[i].largest >= curve.trace[i - 1].largest,
                         "trace largest not monotone");
        }
    }

    // Krawtchouk orthogonality, exact integers
    for (std::uint32_t m : {2u, 7u, 16u, 24u, 28u}) {
        KrawtchoukTable kraw(m);
        bool ok = true;
        for (std::uint32_t j = 0; j <= m && ok; ++j)
            for (std::uint32_t jp = j; jp <= m && ok; ++jp)
                ok = kraw.orthogonality_defect(j, jp) == 0;
        check.expect(ok, fmt("krawtchouk orthogonality m=%u", m));
    }

    // NBW mass, parity and the coefficient bound
    for (std::uint32_t m : {3u, 10u, 16u}) {
        NbwSpectrum spec(m, 60);
        KrawtchoukTable kraw(m);
        bool ok = true;
        for (std::uint32_t t = 0; t <= 60 && ok; ++t) {
            double mass = 0;
            for (std::uint32_t w = 0; w <= m; ++w) {
                double ptw = nbw_transition(spec, kraw, t, w);
                mass += static_cast<double>(KrawtchoukTable::binomial(m, w)) * ptw;
                if ((t % 2) != (w % 2) && ptw > 1e-12) ok = false;
            }
            if (std::abs(mass - 1.0) > 1e-9) ok = false;
            if (t >= 1)
                for (std::uint32_t j = 0; j <= m; ++j) {
                    double cap = std::pow(
                        std::max(std::abs(1.0 - 2.0 * j / m), 1.0 / std::sqrt(m - 1.0)),
                        static_cast<double>(t - 1));
                    if (std::abs(spec.coeff(t, j)) > cap * (1 + 1e-9)) ok = false;
                }
        }
        check.expect(ok, fmt("nbw mass/parity/bound m=%u", m));
    }

    // determinism across worker counts
    {
        TransitiveGraph g(GraphSpec::hypercube(12));
        auto a = chi(g, 0.1, 16, derive_seed(opt.seed, 0x13c), 1);
        auto b = chi(g, 0.1, 16, derive_seed(opt.seed, 0x13c), 4);
        check.expect(a.mean == b.mean && a.std_error == b.std_error,
                     "chi differs across worker counts");
    }

    // empirical open-edge fraction
    {
        TransitiveGraph g(GraphSpec::hypercube(14));
        EdgeRandomness rnd(derive_seed(opt.seed, 0x13d));
        const double p = 0.3;
        std::uint64_t open = 0;
        g.for_each_edge([&](EdgeIndex idx, Vertex, Vertex) {
            if (rnd.value(idx) < p) ++open;
        });
        double e = static_cast<double>(g.edge_count());
        double z = (static_cast<double>(open) / e - p) / std::sqrt(p * (1 - p) / e);
        check.expect(std::abs(z) <= 4.0, fmt("open fraction z=%.2f", z));
    }

    return {"C13", "property-suites", check.pass,
            check.pass ? fmt("%d property checks passed", check.total) : check.first_failure,
            timer.seconds()};
}

inline std::vector<CriterionResult> run_paper_checks(const SuiteOptions& opt) {
    std::vector<CriterionResult> results;
    auto want = [&](const char* id) { return opt.only.empty() || opt.only == id; };
    if (want("C01")) results.push_back(criterion_engine_oracle(opt));
    if (want("C02")) results.push_back(criterion_er_giant(opt));
    if (want("C03")) results.push_back(criterion_giant_component(opt));
    if (want("C04")) results.push_back(criterion_susceptibility(opt));
    if (want("C05")) results.push_back(criterion_cluster_tail(opt));
    if (want("C06")) results.push_back(criterion_pc_expansion(opt));
    if (want("C07")) results.push_back(criterion_nbw_exactness(opt));
    if (want("C08")) results.push_back(criterion_mixing_scaling(opt));
    if (want("C09")) results.push_back(criterion_nbw_triangle(opt));
    if (want("C10")) results.push_back(criterion_magnetization(opt));
    if (want("C11")) results.push_back(criterion_differential_inequalities(opt));
    if (want("C12")) results.push_back(criterion_sprinkling(opt));
    if (want("C13")) results.push_back(criterion_properties(opt));
    return results;
}

// Fast sanity pass, everything at 10-cube scale or below; finishes in well
// under a minute.
inline std::vector<CriterionResult> run_smoke(const SuiteOptions& opt) {
    using namespace checks_detail;
    std::vector<CriterionResult> results;
    detail::Timer total;
    {
        detail::Timer timer;
        TransitiveGraph g(GraphSpec::hypercube(10));
        EdgeRandomness rnd(derive_seed(opt.seed, 0x51));
        auto a = decompose(g, rnd, 0.13);
        auto b = decompose(g, rnd, 0.13);
        bool pass = a.sizes() == b.sizes() && a.largest() == b.largest();
        results.push_back({"S01", "decompose-determinism", pass,
                           fmt("C1=%" PRIu64, a.largest()), timer.seconds()});
    }
    {
        detail::Timer timer;
        TransitiveGraph g(GraphSpec::hypercube(2));
        SmallGraphOracle oracle(g);
        double v = oracle.connection_probability(0.5, 0, 3);
        bool pass = std::abs(v - 0.4375) < 1e-12;
        results.push_back({"S02", "oracle-4cycle", pass, fmt("P(0<->3) = %.6f", v),
                           timer.seconds()});
    }
    {
        detail::Timer timer;
        bool pass = true;
        for (std::uint32_t m = 3; m <= 10; ++m) {
            NbwSpectrum spec(m, 4);
            KrawtchoukTable kraw(m);
            pass = pass && std::abs(nbw_transition(spec, kraw, 4, 0) -
                                    1.0 / ((m - 1.0) * (m - 1.0))) < 1e-10;
        }
        results.push_back({"S03", "nbw-p4-exact", pass, "m in 3..10", timer.seconds()});
    }
    {
        detail::Timer timer;
        TransitiveGraph g(GraphSpec::hypercube(10));
        auto rep = chi(g, 1.0 / 9.0, 20, derive_seed(opt.seed, 0x54), opt.workers);
        bool pass = rep.mean > 1.0 && rep.mean < static_cast<double>(g.vertex_count());
        results.push_back({"S04", "chi-sane", pass, fmt("chi = %.2f", rep.mean),
                           timer.seconds()});
    }
    {
        detail::Timer timer;
        TransitiveGraph g(GraphSpec::hypercube(10));
        SprinklePlan plan =
            sprinkle_plan(g, TransitiveGraph::hypercube_pc_reference(10), 0.25, 0.1);
        auto out = sprinkle_run(g, plan, derive_seed(opt.seed, 0x55));
        bool pass = out.c1_after >= out.c1_at_p1 &&
                    std::abs(plan.p1 + (1 - plan.p1) * plan.p2 - plan.p) < 1e-15;
        results.push_back({"S05", "sprinkle-q10", pass,
                           fmt("C1 %" PRIu64 " -> %" PRIu64, out.c1_at_p1, out.c1_after),
                           timer.seconds()});
    }
    {
        bool pass = total.seconds() < 60.0;
        results.push_back({"S06", "smoke-budget", pass,
                           fmt("total %.1f s (< 60 s)", total.seconds()), 0.0});
    }
    return results;
}

}  // namespace percolab
