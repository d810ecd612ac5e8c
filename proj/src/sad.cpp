#include "avgproc/sad.hpp"

#include <fstream>

namespace avgproc {

ContributionMatrix contribution_matrix(const std::vector<VertexId>& sources,
                                       const std::vector<VertexId>& targets,
                                       const UpdateSequence& seq) {
    ContributionMatrix m;
    m.horizon = seq.horizon;
    for (VertexId target : targets) {
        Profile<double> xi = dual_contributions<double>(target, seq);
        for (VertexId source : sources) m.entries[{source, target}] = xi.at(source);
    }
    return m;
}

void save_contributions(const ContributionMatrix& m, const Graph& g, const std::string& path,
                        std::optional<long> distance_cap) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write contributions: " + path);
    out.precision(17);
    out << "source,target,distance,xi,bound\n";
    for (const auto& [pair, xi] : m.entries) {
        auto [source, target] = pair;
        auto d = g.distance(source, target, distance_cap);
        out << source << "," << target << ",";
        if (d)
            out << *d << "," << xi << "," << 1.0 / (static_cast<double>(*d) + 1.0) << "\n";
        else
            out << "," << xi << ",\n";
    }
}

}  // namespace avgproc
