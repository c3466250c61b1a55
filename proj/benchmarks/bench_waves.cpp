#include <benchmark/benchmark.h>

#include <numbers>

#include "wsl/geometry.hpp"
#include "wsl/waves.hpp"

namespace {

using namespace wsl;

// Leapfrog node-update throughput at two grid sizes.
void BM_LeapfrogSteps(benchmark::State& state) {
    const auto dom = geom::gallery("half_strip");
    const auto grid = fd::build_grid(dom, std::numbers::pi / state.range(0), 60.0);
    const auto op = fd::assemble_laplacian(grid);
    auto [f1, f2] = waves::initial_bump(grid, 4.0, std::numbers::pi / 2, 1.0);
    const double T = 2.0;
    for (auto _ : state) {
        waves::PropagateOptions opt;
        opt.sample_dt = 1e9; // steps only
        benchmark::DoNotOptimize(waves::propagate(grid, op, {f1, f2, 0.0}, T, opt));
    }
    const long steps = static_cast<long>(T / (0.6 * grid.h));
    state.SetItemsProcessed(state.iterations() * steps * grid.size());
    state.SetLabel(std::to_string(grid.size()) + " unknowns");
}
BENCHMARK(BM_LeapfrogSteps)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

} // namespace
