#include <random>

#include <benchmark/benchmark.h>

#include "greedyjump/greedy.hpp"
#include "greedyjump/radial.hpp"
#include "greedyjump/vdc_geometry.hpp"

using namespace greedyjump;

static void BM_Vdc(benchmark::State& state) {
    const auto b = static_cast<std::uint64_t>(state.range(0));
    std::uint64_t n = 0;
    for (auto _ : state) benchmark::DoNotOptimize(vdc(n++, b));
}
BENCHMARK(BM_Vdc)->Arg(2)->Arg(7);

static void BM_SimulateNormsOnly(benchmark::State& state) {
    SimulateOptions opt;
    opt.norms_only = true;
    const SourceSpec source = SourceSpec::parse(state.range(0) == 0 ? "vdc:b=2" : "polyphase:c=sqrt2:p=3");
    opt.policy.mode = TieMode::choose_plus;
    for (auto _ : state) {
        const Trajectory t = simulate({0.3, 0.4}, source, 100000, opt);
        benchmark::DoNotOptimize(t.last);
    }
    state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_SimulateNormsOnly)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_RadialChain(benchmark::State& state) {
    McOptions opt;
    opt.d = static_cast<int>(state.range(0));
    opt.n_steps = 200000;
    opt.burn_in = 1000;
    for (auto _ : state) benchmark::DoNotOptimize(mc_invariant(opt).sum);
    state.SetItemsProcessed(state.iterations() * 200000);
}
BENCHMARK(BM_RadialChain)->Arg(3)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_KernelRow(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    double x = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernel_row_integral(d, x));
        x = x > 20.0 ? 0.1 : x + 0.37;
    }
}
BENCHMARK(BM_KernelRow)->Arg(2)->Arg(3)->Arg(10);

static void BM_SolveStationary(benchmark::State& state) {
    SolverOptions opt;
    opt.d = 3;
    opt.nodes = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(solve_stationary(opt).mean());
}
BENCHMARK(BM_SolveStationary)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_PeriodicStart(benchmark::State& state) {
    const auto [t1, t2] = triangle_region(5);
    const VdcTable table(5, 500);
    for (auto _ : state) benchmark::DoNotOptimize(is_periodic_start(t1.centroid(), 5, 100, 1e-9, &table).is_periodic);
}
BENCHMARK(BM_PeriodicStart);

static void BM_Raster(benchmark::State& state) {
    RasterOptions opt;
    opt.resolution = 200;
    opt.threads = 1;
    for (auto _ : state) benchmark::DoNotOptimize(raster_region(5, opt).size());
}
BENCHMARK(BM_Raster)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
