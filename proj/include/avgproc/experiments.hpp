// Monte Carlo experiment harness. Replicas are embarrassingly parallel: each
// replica derives its own seeds from (base seed, replica index) and writes
// into a preallocated slot, so the aggregate is identical for any job count.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "avgproc/profile.hpp"
#include "avgproc/schedule.hpp"
#include "avgproc/stats.hpp"

namespace avgproc {

struct MomentSpec {
    double m1 = 0.0;
    double m2 = 0.0;
    static MomentSpec of(const InitialLaw& law) { return {law.m1(), law.m2()}; }
};

struct SeriesPoint {
    double t;
    double estimate;
    double stderr_;
    long n;
};

struct Verdict {
    std::string name;
    bool pass;
    std::string detail;
};

struct ExperimentReport {
    std::string name;
    nlohmann::json config;  // full provenance echo
    std::map<std::string, std::vector<SeriesPoint>> series;
    std::vector<Verdict> verdicts;

    bool all_pass() const;
    nlohmann::json to_json() const;
    std::string to_csv() const;  // "series,t,estimate,stderr,n" rows
};

// Runs body(replica_index) for 0..replicas-1, OpenMP-parallel when jobs > 1.
// jobs <= 1 is the serial reference path; results must be written to
// per-replica slots so both paths aggregate identically.
void run_replicas(long replicas, int jobs, const std::function<void(long)>& body);

struct ExperimentOptions {
    int jobs = 1;
    std::size_t region_cap = 0;  // 0: library default
};

ExperimentReport mean_preservation(const Graph& g, const InitialLaw& law, const ClockConfig& cfg,
                                   const std::vector<double>& horizons, long replicas,
                                   VertexId root, const ExperimentOptions& opt = {});

ExperimentReport l2_convergence(const Graph& g, const InitialLaw& law, const ClockConfig& cfg,
                                const std::vector<double>& horizons, long replicas,
                                VertexId root, const ExperimentOptions& opt = {});

ExperimentReport contribution_decay(const Graph& g, const ClockConfig& cfg,
                                    const std::vector<double>& horizons, long replicas,
                                    VertexId sender, VertexId recipient, double epsilon = 0.25,
                                    const ExperimentOptions& opt = {});

// KS comparison of xi_t(u,v) against xi_t(v,u) with independent seeds.
// `bonferroni` divides the 0.01 alpha when several pairs are tested together.
ExperimentReport symmetry_test(const Graph& g, const ClockConfig& cfg, double horizon,
                               long replicas, VertexId u, VertexId v, int bonferroni = 1,
                               const ExperimentOptions& opt = {});

ExperimentReport finite_consensus(const Graph& g, const InitialLaw& law, const ClockConfig& cfg,
                                  double spread_tolerance, long step_budget = 10'000'000);

}  // namespace avgproc
