// Compares the serial and OpenMP paths of the candidate-ranking loop and
// the boundary-trajectory verification fan-out.

#include <benchmark/benchmark.h>

#include <cstdlib>

#include "roasel/care.hpp"
#include "roasel/network.hpp"
#include "roasel/roa.hpp"
#include "roasel/sim.hpp"

using namespace roasel;

namespace {

NetworkSpec example2() {
    NetworkSpec net;
    net.node_count = 4;
    net.adjacency = DenseMatrix{{0, 0.0178, 0.3410, 0.5807},
                                {0.0659, 0, 0.6175, 0.6207},
                                {0.5694, 0.5547, 0, 0.5997},
                                {0.4501, 0.0190, 0.0143, 0}};
    net.candidates = {1, 2, 3, 4};
    return net;
}

void set_threads(int n) {
    static char buf[32];
    std::snprintf(buf, sizeof(buf), "ROA_SELECT_THREADS=%d", n);
    putenv(buf);
}

void BM_rank_serial(benchmark::State& state) {
    set_threads(1);
    NetworkSpec net = example2();
    AnalysisConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(rank_drivers_general(net, cfg));
}

void BM_rank_parallel(benchmark::State& state) {
    set_threads(0);
    NetworkSpec net = example2();
    AnalysisConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(rank_drivers_general(net, cfg));
}

void BM_verify_serial(benchmark::State& state) {
    set_threads(1);
    NetworkSpec net = example2();
    AnalysisConfig cfg;
    DriverReport rep = rank_drivers_general(net, cfg);
    const auto& rec = rep.records[3];
    auto part = partition_input(rep.split, input_matrix(net, 3));
    ControlLaw law = make_control_law(rec.riccati.gain, cfg.saturation_limit);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            verify_roa(rep.split.antistable_block, part.top, law, rec.roa, 32, 0.99, cfg.sim));
}

void BM_verify_parallel(benchmark::State& state) {
    set_threads(0);
    NetworkSpec net = example2();
    AnalysisConfig cfg;
    DriverReport rep = rank_drivers_general(net, cfg);
    const auto& rec = rep.records[3];
    auto part = partition_input(rep.split, input_matrix(net, 3));
    ControlLaw law = make_control_law(rec.riccati.gain, cfg.saturation_limit);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            verify_roa(rep.split.antistable_block, part.top, law, rec.roa, 32, 0.99, cfg.sim));
}

}  // namespace

BENCHMARK(BM_rank_serial);
BENCHMARK(BM_rank_parallel);
BENCHMARK(BM_verify_serial);
BENCHMARK(BM_verify_parallel);
BENCHMARK_MAIN();
