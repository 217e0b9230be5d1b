#include <numbers>

#include <benchmark/benchmark.h>

#include "mplc/beam_array.hpp"
#include "mplc/geometry.hpp"
#include "mplc/propagation.hpp"
#include "mplc/unitary.hpp"
#include "mplc/wfm.hpp"

using namespace mplc;

static void BM_PropagateHop(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto grid = SamplingGrid::centered(n, n, 20e-6);
    const Propagator hop(grid, 0.1, 637e-9);
    auto f = gaussian_beam(grid, {0, 0}, 161.5e-6, 0.0, 0.0, 637e-9).field;
    for (auto _ : state) {
        hop.forward_in_place(f);
        benchmark::DoNotOptimize(f.values().data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n * n));
}
BENCHMARK(BM_PropagateHop)->Arg(128)->Arg(256)->Arg(512);

static void BM_PlaneUpdate(benchmark::State& state) {
    const auto problem = DesignProblem::reference();
    const auto fwd = problem.inputs();
    const auto bwd = problem.output_basis();
    PhaseMask current(problem.grid);
    for (auto _ : state) {
        auto m = plane_update(fwd, bwd, &current);
        benchmark::DoNotOptimize(m.phase().data());
    }
}
BENCHMARK(BM_PlaneUpdate);

static void BM_WfmIterations(benchmark::State& state) {
    const auto problem = DesignProblem::reference();
    const auto u = u2(3 * std::numbers::pi / 20, std::numbers::pi / 2);
    OptimizerConfig cfg;
    cfg.iterations = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(design(problem, u.matrix, cfg).final_fidelity);
}
BENCHMARK(BM_WfmIterations)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_MaxPlanesScan(benchmark::State& state) {
    const auto angles = linspace(0.001, 0.17453292519943295, 300);
    const auto waists = linspace(100e-6, 900e-6, 81);
    for (auto _ : state) benchmark::DoNotOptimize(max_planes_vs_L(MPLCGeometry{}, {0.05}, angles, waists));
}
BENCHMARK(BM_MaxPlanesScan)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
