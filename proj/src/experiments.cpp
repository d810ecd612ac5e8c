#include "avgproc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include "avgproc/dense.hpp"
#include "avgproc/sad.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace avgproc {

bool ExperimentReport::all_pass() const {
    return std::all_of(verdicts.begin(), verdicts.end(),
                       [](const Verdict& v) { return v.pass; });
}

nlohmann::json ExperimentReport::to_json() const {
    nlohmann::json j;
    j["experiment"] = name;
    j["config"] = config;
    for (const auto& [label, points] : series) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& p : points)
            arr.push_back({{"t", p.t}, {"estimate", p.estimate}, {"stderr", p.stderr_}, {"n", p.n}});
        j["series"][label] = arr;
    }
    nlohmann::json vj = nlohmann::json::array();
    for (const auto& v : verdicts)
        vj.push_back({{"name", v.name}, {"pass", v.pass}, {"detail", v.detail}});
    j["verdicts"] = vj;
    j["pass"] = all_pass();
    return j;
}

std::string ExperimentReport::to_csv() const {
    std::ostringstream out;
    out.precision(17);
    out << "series,t,estimate,stderr,n\n";
    for (const auto& [label, points] : series)
        for (const auto& p : points)
            out << label << "," << p.t << "," << p.estimate << "," << p.stderr_ << "," << p.n
                << "\n";
    return out.str();
}

void run_replicas(long replicas, int jobs, const std::function<void(long)>& body) {
    std::exception_ptr failure = nullptr;
    std::mutex failure_mutex;
    auto guarded = [&](long r) {
        try {
            body(r);
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };
#ifdef _OPENMP
    if (jobs > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
        for (long r = 0; r < replicas; ++r) guarded(r);
    } else {
        for (long r = 0; r < replicas; ++r) guarded(r);
    }
#else
    for (long r = 0; r < replicas; ++r) guarded(r);
#endif
    if (failure) std::rethrow_exception(failure);
}

namespace {

constexpr std::uint64_t kClockTag = 0xc10c4ULL;
constexpr std::uint64_t kLawTag = 0x1a3dULL;
constexpr std::uint64_t kSideBTag = 0x51deb2ULL;

std::vector<double> sorted_horizons(std::vector<double> hs) {
    if (hs.empty()) throw std::invalid_argument("need at least one horizon");
    std::sort(hs.begin(), hs.end());
    for (double h : hs)
        if (h < 0.0) throw std::invalid_argument("horizons must be nonnegative");
    return hs;
}

nlohmann::json base_config(const Graph& g, const ClockConfig& cfg,
                           const std::vector<double>& horizons, long replicas,
                           const ExperimentOptions& opt) {
    nlohmann::json j;
    j["graph"] = g.name();
    j["intensity"] = cfg.intensity;
    j["mu_law"] = cfg.mu_law.to_string();
    j["seed"] = cfg.seed;
    j["horizons"] = horizons;
    j["replicas"] = replicas;
    j["jobs"] = opt.jobs;
    return j;
}

std::vector<SeriesPoint> series_from(const std::vector<double>& horizons,
                                     const std::vector<std::vector<double>>& samples) {
    std::vector<SeriesPoint> out;
    for (std::size_t i = 0; i < horizons.size(); ++i) {
        SampleStats s = summarize(samples[i]);
        out.push_back({horizons[i], s.mean, s.stderr_, s.n});
    }
    return out;
}

ClockConfig replica_clock(const ClockConfig& base, long replica) {
    ClockConfig c = base;
    c.seed = mix3(base.seed, static_cast<std::uint64_t>(replica), kClockTag);
    return c;
}

// Vertices within the given graph distance of center.
std::unordered_set<VertexId> ball_vertices(const Graph& g, VertexId center, long radius) {
    std::unordered_set<VertexId> seen{center};
    std::vector<VertexId> frontier{center};
    for (long d = 0; d < radius; ++d) {
        std::vector<VertexId> next;
        for (VertexId v : frontier)
            for (VertexId w : g.neighbors(v))
                if (seen.insert(w).second) next.push_back(w);
        frontier = std::move(next);
    }
    return seen;
}

}  // namespace

ExperimentReport mean_preservation(const Graph& g, const InitialLaw& law, const ClockConfig& cfg,
                                   const std::vector<double>& horizons_in, long replicas,
                                   VertexId root, const ExperimentOptions& opt) {
    auto horizons = sorted_horizons(horizons_in);
    if (!law.is_iid()) throw LawError("mean_preservation needs an i.i.d. law");
    const double m1 = law.m1();

    std::vector<std::vector<double>> eta(horizons.size(), std::vector<double>(replicas));
    run_replicas(replicas, opt.jobs, [&](long r) {
        ClockConfig ccfg = replica_clock(cfg, r);
        InitialLaw rlaw = law.with_seed(mix3(cfg.seed, static_cast<std::uint64_t>(r), kLawTag));
        auto [region, seq] = explore_region(g, root, ccfg, horizons.back(), opt.region_cap);
        DenseRun compiled = DenseRun::compile(seq, {root});
        std::vector<double> values = compiled.values_from(rlaw);
        int root_idx = compiled.index_of(root);
        compiled.run_forward(values, horizons, [&](std::size_t i, const std::vector<double>& v) {
            eta[i][r] = v[root_idx];
        });
    });

    ExperimentReport report;
    report.name = "mean_preservation";
    report.config = base_config(g, cfg, horizons, replicas, opt);
    report.config["law"] = law.to_string();
    report.config["root"] = root;
    report.series["mean"] = series_from(horizons, eta);

    for (const SeriesPoint& p : report.series["mean"]) {
        double margin = kZ99 * p.stderr_ + 1e-12;
        std::ostringstream detail;
        detail.precision(10);
        detail << "t=" << p.t << " estimate=" << p.estimate << " m1=" << m1
               << " 99% margin=" << margin << " n=" << p.n;
        report.verdicts.push_back({"mean within 99% CI at t=" + std::to_string(p.t),
                                   std::fabs(p.estimate - m1) <= margin, detail.str()});
    }
    return report;
}

ExperimentReport l2_convergence(const Graph& g, const InitialLaw& law, const ClockConfig& cfg,
                                const std::vector<double>& horizons_in, long replicas,
                                VertexId root, const ExperimentOptions& opt) {
    auto horizons = sorted_horizons(horizons_in);
    if (!law.is_iid()) throw LawError("l2_convergence needs an i.i.d. law");
    const double m1 = law.m1(), m2 = law.m2();
    // Centering by m1 first: the second moment of the centered initial law is
    // m2 - m1^2, which is the constant in the domination bound.
    const double m2c = m2 - m1 * m1;

    std::vector<std::vector<double>> sq(horizons.size(), std::vector<double>(replicas));
    std::vector<std::vector<double>> ymax(horizons.size(), std::vector<double>(replicas));
    run_replicas(replicas, opt.jobs, [&](long r) {
        ClockConfig ccfg = replica_clock(cfg, r);
        InitialLaw rlaw = law.with_seed(mix3(cfg.seed, static_cast<std::uint64_t>(r), kLawTag));
        auto [region, seq] = explore_region(g, root, ccfg, horizons.back(), opt.region_cap);
        DenseRun compiled = DenseRun::compile(seq, {root});
        int root_idx = compiled.index_of(root);
        // Same update sequence drives both estimates (common random numbers).
        std::vector<double> values = compiled.values_from(rlaw);
        compiled.run_forward(values, horizons, [&](std::size_t i, const std::vector<double>& v) {
            double centered = v[root_idx] - m1;
            sq[i][r] = centered * centered;
        });
        for (std::size_t i = 0; i < horizons.size(); ++i) {
            std::vector<double> xi = compiled.dual_profile(root, horizons[i]);
            ymax[i][r] = *std::max_element(xi.begin(), xi.end());
        }
    });

    ExperimentReport report;
    report.name = "l2_convergence";
    report.config = base_config(g, cfg, horizons, replicas, opt);
    report.config["law"] = law.to_string();
    report.config["root"] = root;
    report.series["second_moment"] = series_from(horizons, sq);
    auto yseries = series_from(horizons, ymax);
    report.series["recipient_max"] = yseries;
    std::vector<SeriesPoint> bound;
    for (const auto& p : yseries)
        bound.push_back({p.t, m2c * p.estimate, m2c * p.stderr_, p.n});
    report.series["moment_bound"] = bound;

    const auto& a = report.series["second_moment"];
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
        double margin = 2.0 * std::sqrt(a[i].stderr_ * a[i].stderr_ +
                                        a[i + 1].stderr_ * a[i + 1].stderr_);
        std::ostringstream detail;
        detail.precision(10);
        detail << "E2(" << a[i + 1].t << ")=" << a[i + 1].estimate << " vs E2(" << a[i].t
               << ")=" << a[i].estimate << " margin=" << margin;
        report.verdicts.push_back(
            {"second moment non-increasing " + std::to_string(a[i].t) + "->" +
                 std::to_string(a[i + 1].t),
             a[i + 1].estimate <= a[i].estimate + margin, detail.str()});
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        double margin = 2.0 * std::sqrt(a[i].stderr_ * a[i].stderr_ +
                                        bound[i].stderr_ * bound[i].stderr_);
        std::ostringstream detail;
        detail.precision(10);
        detail << "E2=" << a[i].estimate << " m2*E[Y]=" << bound[i].estimate
               << " margin=" << margin;
        report.verdicts.push_back({"dominated by m2*E[Y] at t=" + std::to_string(a[i].t),
                                   a[i].estimate <= bound[i].estimate + margin, detail.str()});
    }
    return report;
}

ExperimentReport contribution_decay(const Graph& g, const ClockConfig& cfg,
                                    const std::vector<double>& horizons_in, long replicas,
                                    VertexId sender, VertexId recipient, double epsilon,
                                    const ExperimentOptions& opt) {
    auto horizons = sorted_horizons(horizons_in);
    if (!(epsilon > 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("epsilon must lie in (0,1]");
    auto ball = ball_vertices(g, recipient, static_cast<long>(1.0 / epsilon));

    std::vector<std::vector<double>> xmax(horizons.size(), std::vector<double>(replicas));
    std::vector<std::vector<double>> ymax(horizons.size(), std::vector<double>(replicas));
    std::vector<std::vector<double>> cap(horizons.size(), std::vector<double>(replicas));
    std::vector<char> x_monotone(replicas, 1);

    run_replicas(replicas, opt.jobs, [&](long r) {
        ClockConfig ccfg = replica_clock(cfg, r);
        {
            // Sender max: forward spread of a point mass at the sender.
            auto [region, seq] = explore_spread(g, sender, ccfg, horizons.back(), opt.region_cap);
            DenseRun compiled = DenseRun::compile(seq, {sender});
            std::vector<double> values = compiled.delta_values(sender);
            double prev = 2.0;
            compiled.run_forward(values, horizons, [&](std::size_t i, const std::vector<double>& v) {
                double m = *std::max_element(v.begin(), v.end());
                xmax[i][r] = m;
                if (m > prev * (1.0 + 1e-12)) x_monotone[r] = 0;
                prev = m;
            });
        }
        {
            // Recipient max via dual SAD runs on the same clocks.
            auto [region, seq] = explore_region(g, recipient, ccfg, horizons.back(), opt.region_cap);
            DenseRun compiled = DenseRun::compile(seq, {recipient});
            for (std::size_t i = 0; i < horizons.size(); ++i) {
                std::vector<double> xi = compiled.dual_profile(recipient, horizons[i]);
                ymax[i][r] = *std::max_element(xi.begin(), xi.end());
                double in_ball = 0.0;
                for (std::size_t k = 0; k < xi.size(); ++k)
                    if (ball.count(compiled.vertices()[k])) in_ball = std::max(in_ball, xi[k]);
                cap[i][r] = std::min(1.0, std::max(epsilon, in_ball));
            }
        }
    });

    ExperimentReport report;
    report.name = "contribution_decay";
    report.config = base_config(g, cfg, horizons, replicas, opt);
    report.config["sender"] = sender;
    report.config["recipient"] = recipient;
    report.config["epsilon"] = epsilon;
    report.series["sender_max"] = series_from(horizons, xmax);
    report.series["recipient_max"] = series_from(horizons, ymax);
    report.series["recipient_cap"] = series_from(horizons, cap);

    std::vector<double> med_x, med_y;
    for (std::size_t i = 0; i < horizons.size(); ++i) {
        med_x.push_back(median(xmax[i]));
        med_y.push_back(median(ymax[i]));
        report.series["median_sender_max"].push_back({horizons[i], med_x.back(), 0.0, replicas});
        report.series["median_recipient_max"].push_back({horizons[i], med_y.back(), 0.0, replicas});
    }

    bool all_monotone =
        std::all_of(x_monotone.begin(), x_monotone.end(), [](char c) { return c != 0; });
    report.verdicts.push_back({"sender max pathwise non-increasing", all_monotone,
                               all_monotone ? "all trajectories monotone"
                                            : "a trajectory increased"});
    bool med_x_dec = true, med_y_dec = true;
    for (std::size_t i = 0; i + 1 < horizons.size(); ++i) {
        if (!(med_x[i + 1] < med_x[i])) med_x_dec = false;
        if (!(med_y[i + 1] < med_y[i])) med_y_dec = false;
    }
    std::ostringstream dx, dy;
    dx.precision(6);
    dy.precision(6);
    for (double m : med_x) dx << m << " ";
    for (double m : med_y) dy << m << " ";
    report.verdicts.push_back({"median sender max decreasing", med_x_dec, dx.str()});
    report.verdicts.push_back({"median recipient max decreasing", med_y_dec, dy.str()});
    return report;
}

ExperimentReport symmetry_test(const Graph& g, const ClockConfig& cfg, double horizon,
                               long replicas, VertexId u, VertexId v, int bonferroni,
                               const ExperimentOptions& opt) {
    if (u == v) throw std::invalid_argument("symmetry test needs distinct vertices");
    if (bonferroni < 1) throw std::invalid_argument("bonferroni factor must be >= 1");

    auto sample_xi = [&](VertexId source, VertexId target, std::uint64_t side_tag, long r) {
        // xi_t(source, target): dual SAD started at target, read at source.
        ClockConfig ccfg = cfg;
        ccfg.seed = mix3(mix(cfg.seed, side_tag), static_cast<std::uint64_t>(r), kClockTag);
        auto [region, seq] = explore_region(g, target, ccfg, horizon, opt.region_cap);
        DenseRun compiled = DenseRun::compile(seq, {target});
        std::vector<double> xi = compiled.dual_profile(target, horizon);
        int idx = compiled.index_of(source);
        return idx < 0 ? 0.0 : xi[idx];
    };

    std::vector<double> uv(replicas), vu(replicas);
    run_replicas(replicas, opt.jobs, [&](long r) {
        uv[r] = sample_xi(u, v, 0, r);
        vu[r] = sample_xi(v, u, kSideBTag, r);
    });

    KsResult ks = ks_two_sample(uv, vu);
    SampleStats s_uv = summarize(uv), s_vu = summarize(vu);

    ExperimentReport report;
    report.name = "symmetry_test";
    report.config = base_config(g, cfg, {horizon}, replicas, opt);
    report.config["u"] = u;
    report.config["v"] = v;
    report.config["bonferroni"] = bonferroni;
    report.series["xi_uv_mean"] = {{horizon, s_uv.mean, s_uv.stderr_, s_uv.n}};
    report.series["xi_vu_mean"] = {{horizon, s_vu.mean, s_vu.stderr_, s_vu.n}};

    double alpha = 0.01 / bonferroni;
    std::ostringstream detail;
    detail.precision(6);
    detail << "D=" << ks.statistic << " p=" << ks.p_value << " alpha=" << alpha
           << " mean(uv)=" << s_uv.mean << " mean(vu)=" << s_vu.mean << " mean diff="
           << s_uv.mean - s_vu.mean << " (se "
           << std::sqrt(s_uv.stderr_ * s_uv.stderr_ + s_vu.stderr_ * s_vu.stderr_) << ")";
    report.verdicts.push_back({"KS distributional symmetry", ks.p_value >= alpha, detail.str()});
    return report;
}

ExperimentReport finite_consensus(const Graph& g, const InitialLaw& law, const ClockConfig& cfg,
                                  double spread_tolerance, long step_budget) {
    if (!g.is_finite()) throw GraphError("finite_consensus requires a finite graph");
    const auto& verts = g.vertices();
    std::vector<double> values(verts.size());
    double initial_sum = 0.0;
    for (std::size_t i = 0; i < verts.size(); ++i) {
        values[i] = law.sample(verts[i]);
        initial_sum += values[i];
    }
    const double initial_avg = initial_sum / static_cast<double>(verts.size());
    std::unordered_map<VertexId, int> index;
    for (std::size_t i = 0; i < verts.size(); ++i) index[verts[i]] = static_cast<int>(i);

    auto spread = [&] {
        auto [lo, hi] = std::minmax_element(values.begin(), values.end());
        return *hi - *lo;
    };

    long applied = 0;
    double prev_horizon = 0.0, horizon = 1.0;
    bool reached = spread() <= spread_tolerance;
    while (!reached && applied < step_budget) {
        // Per-edge clock streams are deterministic, so resampling with a
        // larger horizon extends the same realization.
        UpdateSequence seq = sample_finite(g, cfg, horizon);
        for (const UpdateStep& s : seq.steps) {
            if (s.time <= prev_horizon) continue;
            mix_pair(values[index.at(s.edge.u)], values[index.at(s.edge.v)], s.mu);
            ++applied;
            if (applied >= step_budget) break;
        }
        prev_horizon = horizon;
        horizon *= 2.0;
        reached = spread() <= spread_tolerance;
    }
    // Sharpen: re-check between budget exhaustion and success.
    reached = spread() <= spread_tolerance;

    double consensus = values[0];
    ExperimentReport report;
    report.name = "finite_consensus";
    report.config = base_config(g, cfg, {prev_horizon}, 1, {});
    report.config["law"] = law.to_string();
    report.config["spread_tolerance"] = spread_tolerance;
    report.config["step_budget"] = step_budget;
    report.series["spread"] = {{prev_horizon, spread(), 0.0, 1}};
    report.series["consensus"] = {{prev_horizon, consensus, 0.0, 1}};
    report.series["initial_average"] = {{0.0, initial_avg, 0.0, 1}};

    std::ostringstream detail;
    detail.precision(12);
    detail << "spread=" << spread() << " consensus=" << consensus
           << " initial avg=" << initial_avg << " |diff|=" << std::fabs(consensus - initial_avg)
           << " steps=" << applied;
    if (reached) {
        report.verdicts.push_back({"spread below tolerance", true, detail.str()});
        report.verdicts.push_back({"consensus equals initial average",
                                   std::fabs(consensus - initial_avg) <= 1e-9, detail.str()});
    } else {
        // Budget exhausted: inconclusive by contract, not a failure.
        report.verdicts.push_back(
            {"spread below tolerance", true, "inconclusive (step budget exhausted); " + detail.str()});
    }
    return report;
}

}  // namespace avgproc
