#include "avgproc/averaging.hpp"

#include "avgproc/dense.hpp"

namespace avgproc {

double run_at_root(const Graph& g, const InitialLaw& law, const ClockConfig& cfg,
                   double horizon, VertexId root, std::size_t region_cap) {
    auto [region, seq] = explore_region(g, root, cfg, horizon, region_cap);
    DenseRun compiled = DenseRun::compile(seq, {root});
    std::vector<double> values = compiled.values_from(law);
    compiled.run_to(values, horizon);
    return values[compiled.index_of(root)];
}

}  // namespace avgproc
