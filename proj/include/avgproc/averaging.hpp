// The averaging dynamics: fold an update sequence over a profile. One shared
// mixing kernel is used by every execution path (sparse, dense, SAD) so
// coupled runs agree bit for bit.
#pragma once

#include <functional>
#include <vector>

#include "avgproc/profile.hpp"
#include "avgproc/schedule.hpp"

namespace avgproc {

// In-place pairwise mix. Equal values are a fixed point and are left
// untouched, which keeps constant profiles exactly absorbing in floating
// point.
template <typename T>
inline void mix_pair(T& x, T& y, const T& mu) {
    if (x == y) return;
    T a = x, b = y;
    x = (T(1) - mu) * a + mu * b;
    y = mu * a + (T(1) - mu) * b;
}

template <typename T>
inline void apply_step(Profile<T>& p, const UpdateStep& step) {
    VertexId u = step.edge.u, w = step.edge.v;
    auto iu = p.values.find(u);
    auto iw = p.values.find(w);
    // Both endpoints at the default value: nothing moves, keep the support
    // clean (zeros only from absence).
    if (iu == p.values.end() && iw == p.values.end()) return;
    T a = iu == p.values.end() ? p.default_value : iu->second;
    T b = iw == p.values.end() ? p.default_value : iw->second;
    mix_pair(a, b, T(step.mu));
    p.values[u] = std::move(a);
    p.values[w] = std::move(b);
}

template <typename T>
Profile<T> run(Profile<T> init, const UpdateSequence& seq) {
    for (const UpdateStep& s : seq.steps) apply_step(init, s);
    return init;
}

// Observer receives (step, a_before, b_before, a_after, b_after) for every
// step, including fixed-point no-ops.
template <typename T, typename Observer>
Profile<T> run_observed(Profile<T> init, const UpdateSequence& seq, Observer&& observe) {
    for (const UpdateStep& s : seq.steps) {
        T a = init.at(s.edge.u), b = init.at(s.edge.v);
        apply_step(init, s);
        observe(s, a, b, init.at(s.edge.u), init.at(s.edge.v));
    }
    return init;
}

// Calls on_snapshot(i, profile) for each observation time (sorted ascending)
// once all steps up to that time have been applied.
template <typename T, typename Snapshot>
Profile<T> run_snapshots(Profile<T> init, const UpdateSequence& seq,
                         const std::vector<double>& times, Snapshot&& on_snapshot) {
    std::size_t next = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        while (next < seq.steps.size() && seq.steps[next].time <= times[i])
            apply_step(init, seq.steps[next++]);
        on_snapshot(i, init);
    }
    while (next < seq.steps.size()) apply_step(init, seq.steps[next++]);
    return init;
}

// Exact sample of eta_t(root) on a finite or infinite graph: explores the
// influence region of root, samples initial values only there, applies the
// restricted sequence.
double run_at_root(const Graph& g, const InitialLaw& law, const ClockConfig& cfg,
                   double horizon, VertexId root, std::size_t region_cap = 0);

}  // namespace avgproc
