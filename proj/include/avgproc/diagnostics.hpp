// Executable proof machinery: the distance-product potential and its subset
// inequality, the per-step energy ledger, extrema tracking, and the
// exhaustive small-case search certifying that mu = 1/2 maximizes achievable
// SAD levels.
#pragma once

#include <optional>
#include <vector>

#include "avgproc/averaging.hpp"
#include "avgproc/profile.hpp"

namespace avgproc {

// f(S) = prod_{v in S} d(r,v) / (d(r,v)+1). Empty product is 1; any vertex at
// distance 0 (the root itself) forces 0.
class PotentialFunction {
public:
    PotentialFunction(const Graph& g, VertexId root, std::optional<long> distance_cap = std::nullopt)
        : graph_(&g), root_(root), cap_(distance_cap) {}

    VertexId root() const { return root_; }
    double factor(VertexId v) const;  // d/(d+1)
    double operator()(const std::vector<VertexId>& set) const;

private:
    const Graph* graph_;
    VertexId root_;
    std::optional<long> cap_;
};

struct SubsetCheck {
    bool holds;
    double slack;  // (1 - f(S)) - sum_{v in S} xi(v)
};

// Inequality (sum over S of the SAD profile) <= 1 - f(S), with 1e-12 grace.
SubsetCheck check_subset_inequality(const Profile<double>& sad, const PotentialFunction& f,
                                    const std::vector<VertexId>& set);

// Per-step energy bookkeeping: feed as the observer of run_observed. The
// predicted decrement of W = sum eta^2 is 2 mu (1-mu) (a-b)^2; agreement is
// measured relative to the local energy scale a^2 + b^2 (the prediction
// itself sits below rounding noise when a and b nearly coincide).
class EnergyTracker {
public:
    explicit EnergyTracker(const Profile<double>& initial);
    explicit EnergyTracker(const std::vector<double>& initial_values);

    void observe(const UpdateStep& step, double a_before, double b_before, double a_after,
                 double b_after);

    double energy() const { return energy_; }
    double initial_energy() const { return initial_energy_; }
    long steps() const { return steps_; }
    double max_relative_mismatch() const { return max_rel_mismatch_; }
    bool monotone() const { return monotone_; }
    double cumulative_decrement() const { return initial_energy_ - energy_; }

private:
    double energy_ = 0.0;
    double initial_energy_ = 0.0;
    long steps_ = 0;
    double max_rel_mismatch_ = 0.0;
    bool monotone_ = true;
};

// Tracks the max/min envelope of a trajectory of profile extremes; the max
// must never increase and the min never decrease (relative grace 1e-12).
class ExtremaTracker {
public:
    void observe(double current_max, double current_min);
    bool max_monotone() const { return max_ok_; }
    bool min_monotone() const { return min_ok_; }
    double last_max() const { return last_max_; }
    double last_min() const { return last_min_; }

private:
    bool started_ = false;
    bool max_ok_ = true, min_ok_ = true;
    double last_max_ = 0.0, last_min_ = 0.0;
};

enum class MuSearchMode { FixedHalf, GridMu };

struct SadSearchBudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Maximum of xi(target) over all update sequences of length <= n on a small
// finite graph, by exhaustive search over edge choices; mu per step is either
// fixed at 1/2 or swept over the grid {res, 2 res, ..., 1/2}. Cost is
// O((|E| * grid)^n); the search refuses budgets beyond ~1e9 nodes.
double max_sad_level(const Graph& g, VertexId source, VertexId target, int max_updates,
                     MuSearchMode mode, double grid_resolution = 0.05);

}  // namespace avgproc
