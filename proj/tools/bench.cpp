// Benchmarks the compiled dense kernel against the sparse reference engine,
// and serial against OpenMP replica execution.
#include <chrono>
#include <cstdio>

#include "avgproc/dense.hpp"
#include "avgproc/experiments.hpp"

using namespace avgproc;

namespace {

double seconds(const std::function<void()>& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void bench_kernels() {
    Graph g = make_random_regular(2000, 4, 7);
    ClockConfig cfg{1.0, MuLaw::uniform(0.0, 0.5), 8};
    InitialLaw law = InitialLaw::gaussian(0.0, 1.0, 9);
    UpdateSequence seq = sample_finite(g, cfg, 50.0);
    std::printf("single trajectory: random-regular n=2000 d=4, %zu steps\n", seq.steps.size());

    Profile<double> init = sample_profile(g, law);
    Profile<double> sparse_out;
    double t_sparse = seconds([&] { sparse_out = run(init, seq); });

    DenseRun compiled = DenseRun::compile(seq, g.vertices());
    std::vector<double> values;
    double t_dense = seconds([&] {
        values = compiled.values_from(law);
        compiled.run_to(values, seq.horizon);
    });

    bool agree = true;
    for (VertexId v : g.vertices())
        agree = agree && values[static_cast<std::size_t>(compiled.index_of(v))] == sparse_out.at(v);
    std::printf("  sparse reference: %8.3f ms\n", t_sparse * 1e3);
    std::printf("  dense compiled:   %8.3f ms  (%.1fx, outputs %s)\n", t_dense * 1e3,
                t_sparse / t_dense, agree ? "bit-identical" : "DIFFER");
}

void bench_replicas() {
    Graph z2 = make_lattice(2);
    VertexId origin = lattice_pack(2, {0, 0});
    InitialLaw law = InitialLaw::uniform(0.0, 1.0);
    ClockConfig cfg{1.0, MuLaw::half(), 77};
    std::vector<double> horizons{1.0, 2.0, 4.0};
    const long replicas = 2000;
    std::printf("replica harness: mean estimate on Z^2, %ld replicas, t <= 4\n", replicas);

    ExperimentReport serial, parallel;
    double t1 = seconds(
        [&] { serial = mean_preservation(z2, law, cfg, horizons, replicas, origin, {.jobs = 1}); });
    double t4 = seconds([&] {
        parallel = mean_preservation(z2, law, cfg, horizons, replicas, origin, {.jobs = 4});
    });
    bool agree = true;
    for (std::size_t i = 0; i < horizons.size(); ++i)
        agree = agree && serial.series.at("mean")[i].estimate ==
                             parallel.series.at("mean")[i].estimate;
    std::printf("  jobs=1: %8.3f s\n", t1);
    std::printf("  jobs=4: %8.3f s  (%.2fx, aggregates %s)\n", t4, t1 / t4,
                agree ? "identical" : "DIFFER");
}

}  // namespace

int main() {
    bench_kernels();
    bench_replicas();
    return 0;
}
