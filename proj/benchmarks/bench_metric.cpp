#include <benchmark/benchmark.h>

#include <numbers>

#include "wsl/riemann.hpp"

namespace {

using namespace wsl;

void BM_MetricDistance(benchmark::State& state) {
    const auto basis =
        spectrum::modes(spectrum::make_cross_section({{0.0, std::numbers::pi}}), 16);
    riemann::SheetPoint p{{25.0, 0.4}, {}};
    riemann::SheetPoint q{{26.5, -0.1}, {1, 2, 3, 4}};
    for (auto _ : state)
        benchmark::DoNotOptimize(
            riemann::metric_d(riemann::SurfacePoint{p}, riemann::SurfacePoint{q}, basis));
}
BENCHMARK(BM_MetricDistance);

void BM_ModeEvaluation(benchmark::State& state) {
    const auto Y = spectrum::make_cross_section({{0.0, 2.0}, {3.0, 5.5}});
    const auto basis = spectrum::modes(Y, 64);
    double y = 0.1;
    for (auto _ : state) {
        double acc = 0.0;
        for (int j = 1; j <= basis.size(); ++j) acc += spectrum::evaluate_mode(basis, j, y);
        benchmark::DoNotOptimize(acc);
        y = y < 5.0 ? y + 0.013 : 0.1;
    }
}
BENCHMARK(BM_ModeEvaluation);

} // namespace
