// Compiled dense execution of an update sequence: region vertices are
// remapped to contiguous indices and steps become index pairs, so the inner
// loop runs on flat double arrays. This is the fast kernel behind the Monte
// Carlo experiments; the sparse fold in averaging.hpp is the serial reference
// it is tested against (both use the same mix_pair, so results are
// bit-identical).
#pragma once

#include <vector>

#include "avgproc/averaging.hpp"
#include "avgproc/schedule.hpp"

namespace avgproc {

class DenseRun {
public:
    struct Step {
        int u, w;
        double mu;
        double time;
    };

    // Vertices are the union of step endpoints and `extra` (e.g. an isolated
    // root that saw no events).
    static DenseRun compile(const UpdateSequence& seq, const std::vector<VertexId>& extra = {});

    std::size_t size() const { return verts_.size(); }
    const std::vector<VertexId>& vertices() const { return verts_; }
    const std::vector<Step>& steps() const { return steps_; }
    int index_of(VertexId v) const;  // -1 if absent

    std::vector<double> values_from(const InitialLaw& law) const;
    std::vector<double> delta_values(VertexId v) const;

    // Applies all steps in time order; on_snapshot(i, values) fires for each
    // requested time (sorted ascending) once the prefix up to it is applied.
    template <typename Snapshot>
    void run_forward(std::vector<double>& values, const std::vector<double>& times,
                     Snapshot&& on_snapshot) const {
        std::size_t next = 0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            while (next < steps_.size() && steps_[next].time <= times[i]) {
                const Step& s = steps_[next++];
                mix_pair(values[s.u], values[s.w], s.mu);
            }
            on_snapshot(i, values);
        }
        while (next < steps_.size()) {
            const Step& s = steps_[next++];
            mix_pair(values[s.u], values[s.w], s.mu);
        }
    }

    void run_to(std::vector<double>& values, double horizon) const;

    // SAD profile dual to the prefix of steps with time <= horizon, started
    // from delta at `source`: the steps are applied in reverse order. Entry u
    // is xi_horizon(u, source).
    std::vector<double> dual_profile(VertexId source, double horizon) const;

private:
    std::vector<VertexId> verts_;
    std::unordered_map<VertexId, int> index_;
    std::vector<Step> steps_;
};

}  // namespace avgproc
