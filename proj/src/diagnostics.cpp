#include "avgproc/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace avgproc {

double PotentialFunction::factor(VertexId v) const {
    auto d = graph_->distance(root_, v, cap_);
    if (!d) throw GraphError("potential: distance exceeds cap");
    double dd = static_cast<double>(*d);
    return dd / (dd + 1.0);
}

double PotentialFunction::operator()(const std::vector<VertexId>& set) const {
    double f = 1.0;
    for (VertexId v : set) {
        f *= factor(v);
        if (f == 0.0) break;
    }
    return f;
}

SubsetCheck check_subset_inequality(const Profile<double>& sad, const PotentialFunction& f,
                                    const std::vector<VertexId>& set) {
    double sum = 0.0;
    for (VertexId v : set) sum += sad.at(v);
    double slack = (1.0 - f(set)) - sum;
    return {slack >= -1e-12, slack};
}

namespace {

double energy_of(const std::vector<double>& values) {
    double w = 0.0;
    for (double x : values) w += x * x;
    return w;
}

}  // namespace

EnergyTracker::EnergyTracker(const Profile<double>& initial) {
    for (const auto& [v, x] : initial.values) energy_ += x * x;
    initial_energy_ = energy_;
}

EnergyTracker::EnergyTracker(const std::vector<double>& initial_values)
    : energy_(energy_of(initial_values)), initial_energy_(energy_) {}

void EnergyTracker::observe(const UpdateStep& step, double a_before, double b_before,
                            double a_after, double b_after) {
    ++steps_;
    double predicted = 2.0 * step.mu * (1.0 - step.mu) * (a_before - b_before) *
                       (a_before - b_before);
    double observed = (a_before * a_before + b_before * b_before) -
                      (a_after * a_after + b_after * b_after);
    double scale = std::max({a_before * a_before + b_before * b_before, predicted, 1e-300});
    max_rel_mismatch_ = std::max(max_rel_mismatch_, std::fabs(observed - predicted) / scale);
    if (observed < -1e-12 * std::max(scale, 1.0)) monotone_ = false;
    energy_ -= observed;
}

void ExtremaTracker::observe(double current_max, double current_min) {
    if (started_) {
        double grace = 1e-12 * std::max({std::fabs(last_max_), std::fabs(last_min_), 1.0});
        if (current_max > last_max_ + grace) max_ok_ = false;
        if (current_min < last_min_ - grace) min_ok_ = false;
    }
    started_ = true;
    last_max_ = current_max;
    last_min_ = current_min;
}

namespace {

struct SearchContext {
    std::vector<std::pair<int, int>> edges;  // dense index pairs
    std::vector<double> mu_grid;
    int target_idx;
    int max_depth;
};

// DFS over all update sequences of length <= max_depth; records the level at
// the target after every prefix.
void search(const SearchContext& ctx, std::vector<double>& values, int depth, double& best) {
    best = std::max(best, values[ctx.target_idx]);
    if (depth == ctx.max_depth) return;
    for (auto [u, w] : ctx.edges)
        for (double mu : ctx.mu_grid) {
            double a = values[u], b = values[w];
            mix_pair(values[u], values[w], mu);
            search(ctx, values, depth + 1, best);
            values[u] = a;
            values[w] = b;
        }
}

}  // namespace

double max_sad_level(const Graph& g, VertexId source, VertexId target, int max_updates,
                     MuSearchMode mode, double grid_resolution) {
    if (!g.is_finite()) throw GraphError("max_sad_level requires a finite graph");
    if (max_updates < 0) throw std::invalid_argument("max_updates must be nonnegative");

    SearchContext ctx;
    if (mode == MuSearchMode::FixedHalf) {
        ctx.mu_grid = {0.5};
    } else {
        if (!(grid_resolution > 0.0 && grid_resolution <= 0.5))
            throw std::invalid_argument("grid resolution must lie in (0, 1/2]");
        for (double mu = grid_resolution; mu < 0.5 + 1e-12; mu += grid_resolution)
            ctx.mu_grid.push_back(std::min(mu, 0.5));
    }

    const auto& verts = g.vertices();
    std::unordered_map<VertexId, int> index;
    for (std::size_t i = 0; i < verts.size(); ++i) index[verts[i]] = static_cast<int>(i);
    for (const Edge& e : g.edges()) ctx.edges.emplace_back(index.at(e.u), index.at(e.v));
    ctx.target_idx = index.at(target);
    ctx.max_depth = max_updates;

    double branch = static_cast<double>(ctx.edges.size() * ctx.mu_grid.size());
    double nodes = 0.0, layer = 1.0;
    for (int k = 0; k < max_updates; ++k) {
        layer *= branch;
        nodes += layer;
    }
    if (nodes > 1e9)
        throw SadSearchBudgetExceeded("max_sad_level: search space of ~" +
                                      std::to_string(nodes) + " nodes exceeds budget");

    std::vector<double> init(verts.size(), 0.0);
    init[index.at(source)] = 1.0;

    double best = init[ctx.target_idx];
    if (max_updates == 0 || ctx.edges.empty()) return best;

    // First level unrolled so it can parallelize.
    std::vector<std::pair<std::pair<int, int>, double>> first;
    for (auto e : ctx.edges)
        for (double mu : ctx.mu_grid) first.push_back({e, mu});

#pragma omp parallel for schedule(dynamic) reduction(max : best)
    for (std::size_t i = 0; i < first.size(); ++i) {
        std::vector<double> values = init;
        auto [e, mu] = first[i];
        mix_pair(values[e.first], values[e.second], mu);
        double local = values[ctx.target_idx];
        search(ctx, values, 1, local);
        best = std::max(best, local);
    }
    return best;
}

}  // namespace avgproc
