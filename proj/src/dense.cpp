#include "avgproc/dense.hpp"

#include <algorithm>

namespace avgproc {

DenseRun DenseRun::compile(const UpdateSequence& seq, const std::vector<VertexId>& extra) {
    DenseRun r;
    auto intern = [&r](VertexId v) {
        auto [it, fresh] = r.index_.try_emplace(v, static_cast<int>(r.verts_.size()));
        if (fresh) r.verts_.push_back(v);
        return it->second;
    };
    for (VertexId v : extra) intern(v);
    r.steps_.reserve(seq.steps.size());
    for (const UpdateStep& s : seq.steps)
        r.steps_.push_back({intern(s.edge.u), intern(s.edge.v), s.mu, s.time});
    return r;
}

int DenseRun::index_of(VertexId v) const {
    auto it = index_.find(v);
    return it == index_.end() ? -1 : it->second;
}

std::vector<double> DenseRun::values_from(const InitialLaw& law) const {
    std::vector<double> vals(verts_.size());
    for (std::size_t i = 0; i < verts_.size(); ++i) vals[i] = law.sample(verts_[i]);
    return vals;
}

std::vector<double> DenseRun::delta_values(VertexId v) const {
    std::vector<double> vals(verts_.size(), 0.0);
    int i = index_of(v);
    if (i < 0) throw std::invalid_argument("delta vertex not in compiled run");
    vals[i] = 1.0;
    return vals;
}

void DenseRun::run_to(std::vector<double>& values, double horizon) const {
    for (const Step& s : steps_) {
        if (s.time > horizon) break;
        mix_pair(values[s.u], values[s.w], s.mu);
    }
}

std::vector<double> DenseRun::dual_profile(VertexId source, double horizon) const {
    std::vector<double> vals = delta_values(source);
    auto end = std::upper_bound(steps_.begin(), steps_.end(), horizon,
                                [](double h, const Step& s) { return h < s.time; });
    for (auto it = std::make_reverse_iterator(end); it != steps_.rend(); ++it)
        mix_pair(vals[it->u], vals[it->w], it->mu);
    return vals;
}

}  // namespace avgproc
