// Shared randomness for the averaging dynamics: per-edge Poisson clocks and
// mixing weights, materialized as an explicit chronological update sequence.
// Each edge's clock is a deterministic stream keyed by (seed, edge), so lazy
// region expansion on an infinite graph and eager sampling on a finite
// truncation produce the same events for the same edges.
#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "avgproc/graph.hpp"

namespace avgproc {

struct MuLaw {
    enum class Kind { Fixed, Uniform };
    Kind kind = Kind::Fixed;
    double a = 0.5;  // Fixed: the value; Uniform: lower bound (exclusive)
    double b = 0.5;  // Uniform: upper bound (inclusive)

    static MuLaw fixed(double mu);
    static MuLaw half() { return fixed(0.5); }
    static MuLaw uniform(double a, double b);
    static MuLaw parse(const std::string& spec);
    std::string to_string() const;
};

struct ClockConfig {
    double intensity = 1.0;  // Poisson rate per edge
    MuLaw mu_law = MuLaw::half();
    std::uint64_t seed = 0;
};

struct UpdateStep {
    Edge edge;
    double mu;
    double time;
};

struct UpdateSequence {
    std::vector<UpdateStep> steps;  // strictly increasing time
    double horizon = 0.0;
    std::uint64_t rng_seed = 0;
    double intensity = 1.0;
    long tie_count = 0;  // exact time ties broken by edge order (expected 0)
};

struct ExploredRegion {
    VertexId root;
    double horizon;
    std::unordered_set<VertexId> vertices;
    std::unordered_map<VertexId, double> passage_times;  // root maps to 0
};

struct ScheduleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RegionCapExceeded : ScheduleError {
    using ScheduleError::ScheduleError;
};

// All events of one edge's clock on [0, horizon], with their mu draws.
// Deterministic in (cfg.seed, edge); used by both sampling paths.
std::vector<std::pair<double, double>> edge_events(const Edge& e, const ClockConfig& cfg,
                                                   double horizon);

// Merge-sort of all edge clocks of a finite graph.
UpdateSequence sample_finite(const Graph& g, const ClockConfig& cfg, double horizon);

// Default region safety cap; override with the AVGPROC_REGION_CAP env var or
// the explicit parameter.
std::size_t default_region_cap();

// Reverse-time influence region of root: every vertex whose initial value can
// reach root by `horizon` through a chain of updates with increasing times.
// The returned sequence holds all events on edges internal to the region and
// is sufficient to compute eta_t(root) exactly. Expansion is Dijkstra-style
// over the true clock events (in reversed time each frontier wait is
// Exp(intensity), i.e. first passage percolation growth).
std::pair<ExploredRegion, UpdateSequence> explore_region(const Graph& g, VertexId root,
                                                         const ClockConfig& cfg,
                                                         double horizon,
                                                         std::size_t cap = 0);

// Forward-time spread region of root: every vertex root's initial value can
// reach by `horizon`. Same contract, time direction flipped.
std::pair<ExploredRegion, UpdateSequence> explore_spread(const Graph& g, VertexId root,
                                                         const ClockConfig& cfg,
                                                         double horizon,
                                                         std::size_t cap = 0);

// Reversed sequence: order flipped, each time remapped to horizon - time.
UpdateSequence reverse(const UpdateSequence& seq);

// CSV trace: header "time,edge_u,edge_v,mu", one step per line.
void save_trace(const UpdateSequence& seq, const std::string& path);
UpdateSequence load_trace(const std::string& path);

}  // namespace avgproc
