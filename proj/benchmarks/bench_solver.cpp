#include <benchmark/benchmark.h>

#include <numbers>

#include "wsl/dtn.hpp"
#include "wsl/geometry.hpp"

namespace {

using namespace wsl;

void BM_AssembleClosedSystem(benchmark::State& state) {
    const auto dom = geom::gallery("half_strip");
    const auto grid = fd::build_grid(dom, std::numbers::pi / state.range(0), 20.0);
    const auto op = fd::assemble_laplacian(grid);
    const auto basis = spectrum::modes(dom.end_plus.Y, 16);
    for (auto _ : state) {
        dtn::ClosedSystem sys(grid, op, riemann::SheetPoint{{4.0, 0.5}, {}}, basis);
        benchmark::DoNotOptimize(sys.matrix());
    }
    state.SetLabel(std::to_string(grid.size()) + " unknowns");
}
BENCHMARK(BM_AssembleClosedSystem)->Arg(32)->Arg(64);

void BM_FactorizeAndSolve(benchmark::State& state) {
    const auto dom = geom::gallery("half_strip");
    const auto grid = fd::build_grid(dom, std::numbers::pi / state.range(0), 20.0);
    const auto op = fd::assemble_laplacian(grid);
    const auto basis = spectrum::modes(dom.end_plus.Y, 16);
    fd::CVector rhs = fd::CVector::Ones(grid.size());
    for (auto _ : state) {
        dtn::ClosedSystem sys(grid, op, riemann::SheetPoint{{4.0, 0.5}, {}}, basis);
        sys.factorize();
        benchmark::DoNotOptimize(sys.solve(rhs));
    }
    state.SetLabel(std::to_string(grid.size()) + " unknowns");
}
BENCHMARK(BM_FactorizeAndSolve)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_WeightedNormProbe(benchmark::State& state) {
    const auto dom = geom::gallery("half_strip");
    const auto grid = fd::build_grid(dom, std::numbers::pi / 32, 20.0);
    const auto op = fd::assemble_laplacian(grid);
    const auto basis = spectrum::modes(dom.end_plus.Y, 16);
    const auto W = fd::weight_diag(grid, fd::WeightName::poly_minus, 1.0, 0.0, true);
    for (auto _ : state) {
        dtn::ClosedSystem sys(grid, op, riemann::SheetPoint{{4.0, 0.5}, {}}, basis);
        benchmark::DoNotOptimize(dtn::estimate_weighted_norm(sys, W.diag, 1.0));
    }
}
BENCHMARK(BM_WeightedNormProbe)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
