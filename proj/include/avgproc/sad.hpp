// Sharing-a-Drink runs and contribution coefficients. A SAD run is the same
// pairwise mixing fold as the averaging process, started from a point mass;
// the dual run (sequence reversed in time) yields the coefficients of the
// initial values in the current value at the target.
#pragma once

#include <map>
#include <utility>

#include "avgproc/averaging.hpp"

namespace avgproc {

template <typename T = double>
Profile<T> run_sad(VertexId source, const UpdateSequence& seq) {
    return run(Profile<T>::delta(source), seq);
}

// Entry at u is xi_t(u, target): the coefficient of eta_0(u) in eta_t(target).
template <typename T = double>
Profile<T> dual_contributions(VertexId target, const UpdateSequence& seq) {
    return run_sad<T>(target, reverse(seq));
}

struct ContributionMatrix {
    std::map<std::pair<VertexId, VertexId>, double> entries;  // (source, target) -> xi
    double horizon = 0.0;

    double at(VertexId source, VertexId target) const {
        auto it = entries.find({source, target});
        return it == entries.end() ? 0.0 : it->second;
    }
};

ContributionMatrix contribution_matrix(const std::vector<VertexId>& sources,
                                       const std::vector<VertexId>& targets,
                                       const UpdateSequence& seq);

// CSV "source,target,distance,xi,bound" with bound = 1/(d+1). Lazy graphs
// need a distance cap; pairs beyond it get an empty distance/bound field.
void save_contributions(const ContributionMatrix& m, const Graph& g, const std::string& path,
                        std::optional<long> distance_cap = std::nullopt);

}  // namespace avgproc
