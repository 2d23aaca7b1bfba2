// percolab: bond-percolation laboratory on transitive graph families.
//
// Subcommands: chi, pc, tail, survival, ball, triangle, magnetization,
// oracle, nbw, sprinkle, suite. Every run is pinned by (--graph, parameters,
// --seed): rows are byte-identical across reruns and worker counts. Wall
// times live in the manifest, never in the result rows.
//
// Exit codes: 0 ok, 1 usage error, 2 criterion failure (suite), 3 resource
// refusal.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "percolab/checks.hpp"
#include "percolab/estimators.hpp"
#include "percolab/graph.hpp"
#include "percolab/nbw.hpp"
#include "percolab/report.hpp"
#include "percolab/sprinkling.hpp"

namespace {

using namespace percolab;

struct CommonOpts {
    std::string graph;
    std::uint64_t reps = 100;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::string out;
    double mem_cap_gb = 8.0;
};

std::uint64_t default_seed() {
    if (const char* env = std::getenv("PERCOLAB_SEED")) return std::strtoull(env, nullptr, 10);
    return 1;
}

// Coarse peak-memory estimate: decomposition state per worker plus stored
// adjacency for random regular graphs. Refuses before allocating.
void guard_memory(const GraphSpec& spec, unsigned workers, double cap_gb) {
    double v = 0;
    switch (spec.family) {
        case Family::Hypercube: v = std::ldexp(1.0, static_cast<int>(spec.m)); break;
        case Family::Hamming:
        case Family::Torus: v = std::pow(static_cast<double>(spec.n), spec.d); break;
        case Family::Complete:
        case Family::RandomRegular: v = static_cast<double>(spec.n); break;
    }
    double bytes = v * 32.0 * std::max(1u, workers);
    if (spec.family == Family::RandomRegular)
        bytes += v * spec.m * 16.0 + v * spec.m * 8.0;
    if (bytes > cap_gb * (1ull << 30)) {
        std::fprintf(stderr,
                     "refusing: estimated %.2f GiB exceeds --mem-cap-gb %.2f (V = %.3g, "
                     "workers = %u)\n",
                     bytes / (1ull << 30), cap_gb, v, workers);
        std::exit(3);
    }
}

std::string fnum(double v) { return format_number(v); }
std::string inum(std::uint64_t v) { return std::to_string(v); }

void emit(const ResultTable& table, const CommonOpts& common, const nlohmann::ordered_json& config,
          const std::string& started_at) {
    if (common.out.empty()) {
        std::fputs(table.csv().c_str(), stdout);
        return;
    }
    OutputWriter writer(common.out);
    writer.write(table, config, started_at);
    std::fprintf(stderr, "wrote %s.csv, %s.jsonl, %s.manifest.json\n", common.out.c_str(),
                 common.out.c_str(), common.out.c_str());
}

const std::vector<std::string> kEstimatorColumns = {"graph", "p",    "gamma",  "k",   "r",
                                                    "replicates", "mean", "stderr", "seed"};

void add_estimate_row(ResultTable& table, const EstimateReport& rep) {
    std::string k, r;
    for (const auto& [key, value] : rep.params) {
        if (key == "k") k = fnum(value);
        if (key == "r") r = fnum(value);
    }
    table.add_row({rep.graph, std::isnan(rep.p) ? "" : fnum(rep.p),
                   std::isnan(rep.gamma) ? "" : fnum(rep.gamma), k, r, inum(rep.replicates),
                   fnum(rep.mean), fnum(rep.std_error), inum(rep.seed)});
}

nlohmann::ordered_json base_config(const char* sub, const CommonOpts& c) {
    nlohmann::ordered_json j;
    j["subcommand"] = sub;
    j["graph"] = c.graph;
    j["replicates"] = c.reps;
    j["seed"] = c.seed;
    j["workers"] = c.workers;
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"percolab: percolation experiments on transitive graph families"};
    app.require_subcommand(1);

    CommonOpts common;
    common.seed = default_seed();

    auto add_common = [&](CLI::App* sub, bool needs_graph = true) {
        if (needs_graph)
            sub->add_option("--graph", common.graph, "graph spec, e.g. hypercube:m=20")
                ->required();
        sub->add_option("--reps", common.reps, "replicate count");
        sub->add_option("--seed", common.seed, "root seed (default: PERCOLAB_SEED or 1)");
        sub->add_option("--workers", common.workers, "worker threads for replicates");
        sub->add_option("--out", common.out, "output base path (.csv/.jsonl/.manifest.json)");
        sub->add_option("--mem-cap-gb", common.mem_cap_gb, "refuse runs estimated above this");
    };

    double p = 0.5, gamma = 0.1, lambda = 0.1, tolerance = 1e-4, epsilon = 0.1, theta = 0.1;
    double xi = 0.0;
    std::uint64_t k = 1;
    std::uint32_t radius = 1, tmax = 20, mdim = 10;
    std::uint64_t vx = 0, vy = 0;
    double pc_override = -1.0;
    std::string suite_name = "paper-checks";
    std::string only;

    auto* chi_cmd = app.add_subcommand("chi", "susceptibility E|C(0)|");
    add_common(chi_cmd);
    chi_cmd->add_option("--p", p, "retention probability")->required();

    auto* pc_cmd = app.add_subcommand("pc", "critical point via coupled bisection");
    add_common(pc_cmd);
    pc_cmd->add_option("--lambda", lambda, "target chi = lambda V^{1/3}");
    pc_cmd->add_option("--tolerance", tolerance, "bracket width");

    auto* tail_cmd = app.add_subcommand("tail", "P(|C(0)| >= k)");
    add_common(tail_cmd);
    tail_cmd->add_option("--p", p)->required();
    tail_cmd->add_option("--k", k, "cluster size threshold")->required();

    auto* surv_cmd = app.add_subcommand("survival", "P(shell at distance r non-empty)");
    add_common(surv_cmd);
    surv_cmd->add_option("--p", p)->required();
    surv_cmd->add_option("--r", radius, "intrinsic radius")->required();

    auto* ball_cmd = app.add_subcommand("ball", "intrinsic shell and ball volumes");
    add_common(ball_cmd);
    ball_cmd->add_option("--p", p)->required();
    ball_cmd->add_option("--r", radius, "maximum radius")->required();

    auto* tri_cmd = app.add_subcommand("triangle", "triangle diagram estimate");
    add_common(tri_cmd);
    tri_cmd->add_option("--p", p)->required();
    tri_cmd->add_option("--x", vx, "first anchor vertex");
    tri_cmd->add_option("--y", vy, "second anchor vertex");

    auto* mag_cmd = app.add_subcommand("magnetization", "green-vertex hit probability");
    add_common(mag_cmd);
    mag_cmd->add_option("--p", p)->required();
    mag_cmd->add_option("--gamma", gamma, "green density")->required();

    auto* oracle_cmd = app.add_subcommand("oracle", "exact enumeration (<= 22 edges)");
    add_common(oracle_cmd);
    oracle_cmd->add_option("--p", p)->required();
    oracle_cmd->add_option("--gamma", gamma, "green density");

    auto* nbw_cmd = app.add_subcommand("nbw", "non-backtracking walk spectrum");
    nbw_cmd->add_option("--m", mdim, "hypercube dimension")->required();
    nbw_cmd->add_option("--tmax", tmax, "time horizon");
    nbw_cmd->add_option("--xi", xi, "emit the xi-uniform mixing time instead");
    nbw_cmd->add_option("--out", common.out, "output base path");

    auto* spr_cmd = app.add_subcommand("sprinkle", "two-round sprinkling experiment");
    add_common(spr_cmd);
    spr_cmd->add_option("--epsilon", epsilon, "supercriticality")->required();
    spr_cmd->add_option("--theta", theta, "second-round share")->required();
    spr_cmd->add_option("--pc", pc_override,
                        "critical point (default: hypercube reference expansion)");

    auto* suite_cmd = app.add_subcommand("suite", "run a pinned experiment suite");
    suite_cmd->add_option("name", suite_name, "paper-checks or smoke");
    suite_cmd->add_option("--only", only, "run a single criterion id");
    suite_cmd->add_option("--seed", common.seed, "suite seed");
    suite_cmd->add_option("--workers", common.workers, "worker threads");
    suite_cmd->add_option("--out", common.out, "output base path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    const std::string started_at = utc_timestamp();
    try {
        if (suite_cmd->parsed()) {
            SuiteOptions opt;
            opt.seed = common.seed;
            opt.workers = std::max(1u, common.workers);
            opt.only = only;
            if (suite_name != "paper-checks" && suite_name != "smoke") {
                std::fprintf(stderr, "unknown suite '%s' (paper-checks|smoke)\n",
                             suite_name.c_str());
                return 1;
            }
            auto results =
                suite_name == "smoke" ? run_smoke(opt) : run_paper_checks(opt);
            ResultTable table({"id", "name", "pass", "details", "elapsed_s"});
            bool all = true;
            for (const auto& r : results) {
                std::printf("%s %-28s %s  [%6.1fs]  %s\n", r.id.c_str(), r.name.c_str(),
                            r.pass ? "PASS" : "FAIL", r.elapsed_s, r.details.c_str());
                std::fflush(stdout);
                table.add_row({r.id, r.name, r.pass ? "1" : "0", r.details, fnum(r.elapsed_s)});
                all = all && r.pass;
            }
            if (!common.out.empty()) {
                nlohmann::ordered_json config;
                config["subcommand"] = "suite";
                config["name"] = suite_name;
                config["seed"] = common.seed;
                config["workers"] = opt.workers;
                OutputWriter(common.out).write(table, config, started_at);
            }
            return all ? 0 : 2;
        }

        if (nbw_cmd->parsed()) {
            NbwSpectrum spec(mdim, std::max(tmax, 2u));
            KrawtchoukTable kraw(mdim);
            nlohmann::ordered_json config;
            config["subcommand"] = "nbw";
            config["m"] = mdim;
            if (xi > 0) {
                std::uint32_t t = uniform_mixing_time(spec, kraw, xi);
                ResultTable table({"m", "xi", "mixing_time"});
                table.add_row({inum(mdim), fnum(xi), inum(t)});
                config["xi"] = xi;
                emit(table, common, config, started_at);
            } else {
                ResultTable table({"m", "t", "weight", "probability"});
                for (std::uint32_t t = 0; t <= tmax; ++t)
                    for (std::uint32_t w = 0; w <= mdim; ++w)
                        table.add_row({inum(mdim), inum(t), inum(w),
                                       fnum(nbw_transition(spec, kraw, t, w))});
                config["tmax"] = tmax;
                emit(table, common, config, started_at);
            }
            return 0;
        }

        GraphSpec gspec = GraphSpec::parse(common.graph);
        guard_memory(gspec, common.workers, common.mem_cap_gb);
        TransitiveGraph graph(gspec);

        if (chi_cmd->parsed()) {
            auto rep = chi(graph, p, common.reps, common.seed, common.workers);
            ResultTable table(kEstimatorColumns);
            add_estimate_row(table, rep);
            auto config = base_config("chi", common);
            config["p"] = p;
            config["elapsed_s"] = rep.elapsed_s;
            emit(table, common, config, started_at);
        } else if (pc_cmd->parsed()) {
            auto est = estimate_pc(graph, lambda, tolerance, common.reps, common.seed,
                                   common.workers);
            ResultTable table({"graph", "lambda", "target", "p_lo", "p_hi", "p_hat",
                               "chi_at_p_hat", "chi_stderr", "z_lo", "z_hi", "probes",
                               "replicates", "seed"});
            table.add_row({gspec.to_string(), fnum(lambda), fnum(est.target), fnum(est.p_lo),
                           fnum(est.p_hi), fnum(est.p_hat), fnum(est.chi_at_p_hat.mean),
                           fnum(est.chi_at_p_hat.std_error), fnum(est.z_lo), fnum(est.z_hi),
                           inum(est.probes), inum(common.reps), inum(common.seed)});
            auto config = base_config("pc", common);
            config["lambda"] = lambda;
            config["tolerance"] = tolerance;
            config["elapsed_s"] = est.chi_at_p_hat.elapsed_s;
            emit(table, common, config, started_at);
        } else if (tail_cmd->parsed()) {
            auto rep = cluster_tail(graph, p, k, common.reps, common.seed, common.workers);
            ResultTable table(kEstimatorColumns);
            add_estimate_row(table, rep);
            auto config = base_config("tail", common);
            config["p"] = p;
            config["k"] = k;
            config["elapsed_s"] = rep.elapsed_s;
            emit(table, common, config, started_at);
        } else if (surv_cmd->parsed()) {
            auto rep = survival_probability(graph, p, radius, common.reps, common.seed,
                                            common.workers);
            ResultTable table(kEstimatorColumns);
            add_estimate_row(table, rep);
            auto config = base_config("survival", common);
            config["p"] = p;
            config["r"] = radius;
            config["elapsed_s"] = rep.elapsed_s;
            emit(table, common, config, started_at);
        } else if (ball_cmd->parsed()) {
            auto rep = ball_volumes(graph, p, radius, common.reps, common.seed, common.workers);
            ResultTable table({"graph", "p", "t", "shell_mean", "shell_stderr", "ball_mean",
                               "ball_stderr", "replicates", "seed"});
            for (std::uint32_t t = 0; t <= radius; ++t)
                table.add_row({rep.graph, fnum(p), inum(t), fnum(rep.shell[t].mean),
                               fnum(rep.shell[t].std_error), fnum(rep.cumulative[t].mean),
                               fnum(rep.cumulative[t].std_error), inum(common.reps),
                               inum(common.seed)});
            auto config = base_config("ball", common);
            config["p"] = p;
            config["r"] = radius;
            config["elapsed_s"] = rep.elapsed_s;
            emit(table, common, config, started_at);
        } else if (tri_cmd->parsed()) {
            auto rep = triangle_diagram(graph, p, vx, vy, common.reps, common.seed,
                                        common.workers);
            double aborted = 0;
            for (const auto& [key, value] : rep.params)
                if (key == "aborted") aborted = value;
            if (aborted > 0)
                std::fprintf(stderr, "note: %.0f replicates aborted at the cost cap\n", aborted);
            ResultTable table(kEstimatorColumns);
            add_estimate_row(table, rep);
            auto config = base_config("triangle", common);
            config["p"] = p;
            config["x"] = vx;
            config["y"] = vy;
            config["aborted"] = aborted;
            config["elapsed_s"] = rep.elapsed_s;
            emit(table, common, config, started_at);
        } else if (mag_cmd->parsed()) {
            auto point = magnetization(graph, p, gamma, common.reps, common.seed, common.workers);
            ResultTable table(kEstimatorColumns);
            table.add_row({gspec.to_string(), fnum(p), fnum(gamma), "", "", inum(common.reps),
                           fnum(point.value), fnum(point.std_error), inum(common.seed)});
            auto config = base_config("magnetization", common);
            config["p"] = p;
            config["gamma"] = gamma;
            emit(table, common, config, started_at);
        } else if (oracle_cmd->parsed()) {
            SmallGraphOracle oracle(graph);
            ResultTable table({"graph", "p", "gamma", "quantity", "value"});
            auto row = [&](const std::string& q, double value) {
                table.add_row({gspec.to_string(), fnum(p), fnum(gamma), q, fnum(value)});
            };
            row("chi", oracle.chi(p));
            row("magnetization", oracle.magnetization(p, gamma));
            row("nabla_00", oracle.nabla(p, 0, 0));
            row("nabla_max", oracle.nabla_max(p));
            Vertex far = graph.vertex_count() - 1;
            row("connect_0_to_" + std::to_string(far),
                oracle.connection_probability(p, 0, far));
            auto law = oracle.cluster_law(p);
            for (std::size_t kk = 1; kk < law.size(); ++kk)
                row("law_" + std::to_string(kk), law[kk]);
            auto config = base_config("oracle", common);
            config["p"] = p;
            config["gamma"] = gamma;
            emit(table, common, config, started_at);
        } else if (spr_cmd->parsed()) {
            double pc = pc_override;
            if (pc < 0) {
                if (gspec.family != Family::Hypercube) {
                    std::fprintf(stderr, "sprinkle: --pc required for non-hypercube graphs\n");
                    return 1;
                }
                pc = TransitiveGraph::hypercube_pc_reference(gspec.m);
            }
            SprinklePlan plan = sprinkle_plan(graph, pc, epsilon, theta);
            ResultTable table({"graph", "epsilon", "theta", "p1", "p2", "k0", "Z_at_p1",
                               "C1_after", "merge_fraction", "boundary_closed_edges", "ratio",
                               "seed"});
            auto outcomes =
                run_replicates<SprinkleOutcome>(common.reps, common.workers, [&](std::uint64_t j) {
                    return sprinkle_run(graph, plan,
                                        detail::replicate_seed(common.seed, "sprinkle", j));
                });
            for (std::uint64_t j = 0; j < common.reps; ++j) {
                const auto& out = outcomes[j];
                table.add_row({gspec.to_string(), fnum(epsilon), fnum(theta), fnum(plan.p1),
                               fnum(plan.p2), inum(plan.k0), inum(out.z_at_p1),
                               inum(out.c1_after), fnum(out.merge_fraction),
                               inum(out.boundary_closed_edges), fnum(out.boundary_ratio),
                               inum(detail::replicate_seed(common.seed, "sprinkle", j))});
            }
            auto config = base_config("sprinkle", common);
            config["epsilon"] = epsilon;
            config["theta"] = theta;
            config["pc"] = pc;
            emit(table, common, config, started_at);
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
