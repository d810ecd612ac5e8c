// Command-line front end: reproducible single trajectories, invariant check
// suites, Monte Carlo experiments, and replay of saved update traces.
#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "avgproc/diagnostics.hpp"
#include "avgproc/dense.hpp"
#include "avgproc/experiments.hpp"
#include "avgproc/rational.hpp"
#include "avgproc/sad.hpp"

using namespace avgproc;
using nlohmann::json;

namespace {

constexpr int kExitVerdict = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

struct GlobalOpts {
    std::uint64_t seed = 1;
    int jobs = 1;
    std::string out = ".";
    std::string format = "json";
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

void emit_report(const GlobalOpts& g, const ExperimentReport& rep, const std::string& stem) {
    std::filesystem::create_directories(g.out);
    std::string base = g.out + "/" + stem;
    write_text(base + ".json", rep.to_json().dump(2) + "\n");
    if (g.format == "csv") write_text(base + ".csv", rep.to_csv());
    for (const auto& v : rep.verdicts)
        std::cout << (v.pass ? "PASS " : "FAIL ") << v.name << ": " << v.detail << "\n";
    std::cout << "wrote " << base << ".json\n";
}

std::vector<double> parse_horizons(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    if (out.empty()) throw std::invalid_argument("empty horizon list");
    return out;
}

// --- simulate ---------------------------------------------------------------

int cmd_simulate(const GlobalOpts& g, const std::string& graph_spec,
                 const std::string& law_spec, double horizon, double intensity,
                 const std::string& mu_spec, const std::string& root_label) {
    Graph graph = parse_graph_spec(graph_spec);
    InitialLaw law = InitialLaw::parse(law_spec).with_seed(mix(g.seed, 0x1a3d));
    ClockConfig cfg{intensity, MuLaw::parse(mu_spec), mix(g.seed, 0xc10c4)};

    json config{{"graph", graph_spec}, {"law", law_spec},      {"t", horizon},
                {"intensity", intensity}, {"mu", mu_spec},     {"seed", g.seed},
                {"root", root_label},     {"format", g.format}};

    std::vector<VertexId> vertices;
    Profile<double> final_profile;
    Profile<double> initial;
    long n_steps = 0;
    if (graph.is_finite()) {
        initial = sample_profile(graph, law);
        UpdateSequence seq = sample_finite(graph, cfg, horizon);
        n_steps = static_cast<long>(seq.steps.size());
        final_profile = run(initial, seq);
        vertices = graph.vertices();
    } else {
        if (root_label.empty())
            throw GraphError("--root is required for infinite graphs");
        VertexId root = parse_vertex_label(graph, root_label);
        auto [region, seq] = explore_region(graph, root, cfg, horizon);
        n_steps = static_cast<long>(seq.steps.size());
        for (VertexId v : region.vertices) {
            vertices.push_back(v);
            initial.set(v, law.sample(v));
        }
        std::sort(vertices.begin(), vertices.end());
        final_profile = run(initial, seq);
        config["region_vertices"] = vertices.size();
    }

    std::filesystem::create_directories(g.out);
    std::ostringstream csv;
    csv.precision(17);
    csv << "t,vertex,value\n";
    for (VertexId v : vertices)
        csv << 0.0 << "," << format_vertex_label(graph, v) << "," << initial.at(v) << "\n";
    for (VertexId v : vertices)
        csv << horizon << "," << format_vertex_label(graph, v) << "," << final_profile.at(v)
            << "\n";
    write_text(g.out + "/simulate_snapshot.csv", csv.str());

    double sum = 0.0, energy = 0.0, mx = -1e300, mn = 1e300;
    for (VertexId v : vertices) {
        double x = final_profile.at(v);
        sum += x;
        energy += x * x;
        mx = std::max(mx, x);
        mn = std::min(mn, x);
    }
    json summary{{"config", config}, {"horizon", horizon}, {"n_steps", n_steps},
                 {"sum", sum},       {"energy", energy},   {"max", mx},
                 {"min", mn}};
    write_text(g.out + "/simulate_summary.json", summary.dump(2) + "\n");
    std::cout << summary.dump(2) << "\n";
    return 0;
}

// --- check ------------------------------------------------------------------

int cmd_check(const GlobalOpts& g, const std::string& suite, const std::string& graph_spec,
              long trials, double horizon, int n_updates, double grid,
              const std::string& root_label) {
    Graph graph = parse_graph_spec(graph_spec);
    json report{{"suite", suite},
                {"config",
                 {{"graph", graph_spec}, {"trials", trials}, {"t", horizon},
                  {"n_updates", n_updates}, {"seed", g.seed}}}};
    bool pass = true;

    if (suite == "duality") {
        if (!graph.is_finite()) throw GraphError("check duality needs a finite graph");
        double worst = 0.0;
        Rng rng(mix(g.seed, 0xd0));
        for (long i = 0; i < trials; ++i) {
            ClockConfig cfg{1.0, MuLaw::uniform(0.0, 0.5), mix3(g.seed, i, 0xd1)};
            UpdateSequence seq = sample_finite(graph, cfg, horizon);
            VertexId target = graph.vertices()[rng.next_below(graph.vertex_count())];
            Profile<double> init;
            for (VertexId v : graph.vertices()) init.set(v, rng.next_unit() * 4.0 - 2.0);
            Profile<double> eta = run(init, seq);
            Profile<double> xi = dual_contributions(target, seq);
            double convex = 0.0;
            for (const auto& [v, w] : xi.values) convex += w * init.at(v);
            worst = std::max(worst, std::fabs(eta.at(target) - convex));
        }
        pass = worst <= 1e-10;
        report["max_abs_error"] = worst;
    } else if (suite == "bounds") {
        long checks = 0, violations = 0;
        json witnesses = json::array();
        Rng rng(mix(g.seed, 0xb0));
        for (long i = 0; i < trials; ++i) {
            ClockConfig cfg{1.0, MuLaw::uniform(0.0, 0.5), mix3(g.seed, i, 0xb1)};
            VertexId target;
            UpdateSequence seq;
            if (graph.is_finite()) {
                target = graph.vertices()[rng.next_below(graph.vertex_count())];
                seq = sample_finite(graph, cfg, horizon);
            } else {
                if (root_label.empty())
                    throw GraphError("check bounds on an infinite graph needs --root");
                target = parse_vertex_label(graph, root_label);
                seq = explore_region(graph, target, cfg, horizon).second;
            }
            Profile<double> xi = dual_contributions(target, seq);
            for (const auto& [u, x] : xi.values) {
                ++checks;
                double dist = static_cast<double>(*graph.distance(u, target));
                if (x > 1.0 / (dist + 1.0) + 1e-12) {
                    ++violations;
                    witnesses.push_back({{"u", format_vertex_label(graph, u)},
                                         {"v", format_vertex_label(graph, target)},
                                         {"xi", x},
                                         {"distance", dist}});
                }
            }
        }
        pass = violations == 0;
        report["checks"] = checks;
        report["violations"] = violations;
        report["witnesses"] = witnesses;
    } else if (suite == "energy") {
        if (!graph.is_finite()) throw GraphError("check energy needs a finite graph");
        double worst = 0.0;
        bool monotone = true;
        long steps = 0;
        for (long i = 0; i < trials; ++i) {
            Profile<double> init =
                sample_profile(graph, InitialLaw::gaussian(0.0, 1.0, mix3(g.seed, i, 0xe0)));
            UpdateSequence seq =
                sample_finite(graph, {1.0, MuLaw::uniform(0.0, 0.5), mix3(g.seed, i, 0xe1)},
                              horizon);
            EnergyTracker tr(init);
            run_observed(init, seq,
                         [&](const UpdateStep& s, double a, double b, double a2, double b2) {
                             tr.observe(s, a, b, a2, b2);
                         });
            worst = std::max(worst, tr.max_relative_mismatch());
            monotone = monotone && tr.monotone();
            steps += tr.steps();
        }
        pass = worst < 1e-12 && monotone;
        report["steps"] = steps;
        report["max_relative_mismatch"] = worst;
        report["monotone"] = monotone;
    } else if (suite == "simplif") {
        if (!graph.is_finite()) throw GraphError("check simplif needs a small finite graph");
        long violations = 0;
        double worst_excess = -1.0;
        for (VertexId src : graph.vertices())
            for (VertexId tgt : graph.vertices()) {
                double half = max_sad_level(graph, src, tgt, n_updates, MuSearchMode::FixedHalf);
                double best =
                    max_sad_level(graph, src, tgt, n_updates, MuSearchMode::GridMu, grid);
                worst_excess = std::max(worst_excess, best - half);
                if (best > half + 1e-12) ++violations;
            }
        pass = violations == 0;
        report["violations"] = violations;
        report["worst_grid_excess"] = worst_excess;
    } else {
        throw std::invalid_argument("unknown check suite: " + suite);
    }

    report["pass"] = pass;
    std::filesystem::create_directories(g.out);
    write_text(g.out + "/check_" + suite + ".json", report.dump(2) + "\n");
    std::cout << report.dump(2) << "\n";
    return pass ? 0 : kExitVerdict;
}

// --- experiment -------------------------------------------------------------

int cmd_experiment(const GlobalOpts& g, const std::string& name, const std::string& graph_spec,
                   const std::string& law_spec, const std::string& horizons_csv, long replicas,
                   const std::string& root_label, const std::string& u_label,
                   const std::string& v_label, double tolerance) {
    Graph graph = parse_graph_spec(graph_spec);
    InitialLaw law = InitialLaw::parse(law_spec);
    ClockConfig cfg{1.0, MuLaw::half(), g.seed};
    std::vector<double> horizons = parse_horizons(horizons_csv);
    ExperimentOptions opt{.jobs = g.jobs};

    auto root = [&] {
        if (root_label.empty()) {
            if (!graph.is_finite()) throw GraphError("--root is required for infinite graphs");
            return graph.vertices().front();
        }
        return parse_vertex_label(graph, root_label);
    };

    ExperimentReport rep;
    if (name == "mean") {
        rep = mean_preservation(graph, law, cfg, horizons, replicas, root(), opt);
    } else if (name == "l2") {
        rep = l2_convergence(graph, law, cfg, horizons, replicas, root(), opt);
    } else if (name == "decay") {
        if (u_label.empty() || v_label.empty())
            throw std::invalid_argument("experiment decay needs --u and --v");
        rep = contribution_decay(graph, cfg, horizons, replicas,
                                 parse_vertex_label(graph, u_label),
                                 parse_vertex_label(graph, v_label), 0.25, opt);
    } else if (name == "symmetry") {
        if (u_label.empty() || v_label.empty())
            throw std::invalid_argument("experiment symmetry needs --u and --v");
        rep = symmetry_test(graph, cfg, horizons.back(), replicas,
                            parse_vertex_label(graph, u_label),
                            parse_vertex_label(graph, v_label), 1, opt);
    } else if (name == "consensus") {
        rep = finite_consensus(graph, law, cfg, tolerance);
    } else {
        throw std::invalid_argument("unknown experiment: " + name);
    }
    rep.config["law"] = law_spec;
    emit_report(g, rep, "experiment_" + name);
    return rep.all_pass() ? 0 : kExitVerdict;
}

// --- trace-replay -----------------------------------------------------------

int cmd_trace_replay(const GlobalOpts& g, const std::string& trace_path,
                     const std::string& law_spec) {
    UpdateSequence seq = load_trace(trace_path);
    InitialLaw law = InitialLaw::parse(law_spec).with_seed(mix(g.seed, 0x1a3d));
    std::set<VertexId> verts;
    for (const auto& s : seq.steps) {
        verts.insert(s.edge.u);
        verts.insert(s.edge.v);
    }
    Profile<double> init;
    for (VertexId v : verts) init.set(v, law.sample(v));
    Profile<double> out = run(init, seq);

    std::filesystem::create_directories(g.out);
    std::ostringstream csv;
    csv.precision(17);
    csv << "t,vertex,value\n";
    for (VertexId v : verts) csv << seq.horizon << "," << v << "," << out.at(v) << "\n";
    write_text(g.out + "/replay_snapshot.csv", csv.str());
    json summary{{"config", {{"trace", trace_path}, {"law", law_spec}, {"seed", g.seed}}},
                 {"horizon", seq.horizon},
                 {"n_steps", seq.steps.size()},
                 {"sum", out.support_sum()}};
    write_text(g.out + "/replay_summary.json", summary.dump(2) + "\n");
    std::cout << summary.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"averaging-process simulator: Poisson-clock pairwise averaging on graphs,\n"
                 "its sharing-a-drink dual, invariant checks, and Monte Carlo experiments"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--seed", g.seed, "base seed; all randomness derives from it");
    app.add_option("--jobs", g.jobs, "parallel replica workers");
    app.add_option("--out", g.out, "output directory");
    app.add_option("--format", g.format, "report format: json|csv (csv adds time series)")
        ->check(CLI::IsMember({"json", "csv"}));

    std::string graph_spec = "cycle:n=10", law_spec = "uniform:0,1", mu_spec = "half";
    std::string root_label, u_label, v_label, suite, exp_name, trace_path;
    std::string horizons_csv = "1,2,4";
    double horizon = 1.0, intensity = 1.0, grid = 0.05, tolerance = 1e-8;
    long trials = 100, replicas = 1000;
    int n_updates = 4;

    CLI::App* sim = app.add_subcommand("simulate", "run one trajectory, write snapshots");
    sim->fallthrough();
    sim->add_option("--graph", graph_spec, "graph spec, e.g. cycle:n=100 or lattice:d=2");
    sim->add_option("--law", law_spec, "initial law spec, e.g. gaussian:0,1");
    sim->add_option("--t", horizon, "time horizon");
    sim->add_option("--intensity", intensity, "Poisson clock rate per edge");
    sim->add_option("--mu", mu_spec, "mixing parameter law: half|fixed:x|uniform:a,b");
    sim->add_option("--root", root_label, "root vertex (required for infinite graphs)");

    CLI::App* chk = app.add_subcommand("check", "run an invariant check suite");
    chk->fallthrough();
    chk->add_option("suite", suite, "duality|bounds|energy|simplif")->required();
    chk->add_option("--graph", graph_spec, "graph spec");
    chk->add_option("--trials", trials, "independent trials");
    chk->add_option("--t", horizon, "time horizon per trial");
    chk->add_option("--n-updates", n_updates, "update budget for simplif search");
    chk->add_option("--grid", grid, "mu grid resolution for simplif");
    chk->add_option("--root", root_label, "root vertex for infinite graphs");

    CLI::App* exp = app.add_subcommand("experiment", "run a Monte Carlo experiment");
    exp->fallthrough();
    exp->add_option("name", exp_name, "mean|l2|decay|symmetry|consensus")->required();
    exp->add_option("--graph", graph_spec, "graph spec");
    exp->add_option("--law", law_spec, "initial law spec");
    exp->add_option("--horizons", horizons_csv, "comma-separated horizons");
    exp->add_option("--replicas", replicas, "Monte Carlo replicas");
    exp->add_option("--root", root_label, "observed vertex");
    exp->add_option("--u", u_label, "first vertex (decay/symmetry)");
    exp->add_option("--v", v_label, "second vertex (decay/symmetry)");
    exp->add_option("--tol", tolerance, "spread tolerance (consensus)");

    CLI::App* rep = app.add_subcommand("trace-replay", "re-run a saved update trace");
    rep->fallthrough();
    rep->add_option("--trace", trace_path, "update sequence CSV")->required();
    rep->add_option("--law", law_spec, "initial law spec");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (sim->parsed())
            return cmd_simulate(g, graph_spec, law_spec, horizon, intensity, mu_spec, root_label);
        if (chk->parsed())
            return cmd_check(g, suite, graph_spec, trials, horizon, n_updates, grid, root_label);
        if (exp->parsed())
            return cmd_experiment(g, exp_name, graph_spec, law_spec, horizons_csv, replicas,
                                  root_label, u_label, v_label, tolerance);
        if (rep->parsed()) return cmd_trace_replay(g, trace_path, law_spec);
    } catch (const RegionCapExceeded& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return kExitResource;
    } catch (const SadSearchBudgetExceeded& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return kExitResource;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
