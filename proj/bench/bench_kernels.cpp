// Serial reference vs OpenMP for the oracle kernels.

#include "metro/dataset.hpp"
#include "metro/kernels.hpp"
#include "metro/oracle.hpp"
#include "metro/rng.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace metro;

namespace {

Exec exec_of(const benchmark::State& state) {
    return state.range(0) == 0 ? Exec::serial : Exec::parallel;
}

void label_exec(benchmark::State& state) {
    state.SetLabel(state.range(0) == 0 ? "serial" : "openmp");
}

void BM_HypothesisMoments(benchmark::State& state) {
    const std::size_t points = 16;
    const auto hs = all_labelings(points);
    FiniteDistribution dist;
    dist.weight.assign(points, 1.0 / points);
    Rng r(1);
    for (std::size_t i = 0; i < points; ++i) dist.eta.push_back(r.uniform());
    const auto ey = dist.mean_labels();
    for (auto _ : state) {
        benchmark::DoNotOptimize(hypothesis_moments(hs.signs, points, dist.weight, ey, exec_of(state)));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * hs.size()));
    label_exec(state);
}
BENCHMARK(BM_HypothesisMoments)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_HalfPlaneConfusion(benchmark::State& state) {
    const Dataset d = gen_figure1_like(3000, 0);
    const auto planes = linear_grid_2d(d.features, 360, 50);
    for (auto _ : state) {
        benchmark::DoNotOptimize(halfplane_confusion(d.features, d.labels, planes, exec_of(state)));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * planes.size()));
    label_exec(state);
}
BENCHMARK(BM_HalfPlaneConfusion)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SurrogateRisks(benchmark::State& state) {
    const std::size_t points = 6;
    const auto hs = score_grid_set(points, kDefaultScoreGrid, 20000, 2);
    std::vector<double> eta(points, 0.3);
    const CostMatrix c = training_costs(f_beta(1.0), -0.5);
    for (auto _ : state) {
        const auto risks = conditional_surrogate_risks(hs.scores, points, eta, c, PhiKind::logistic(), exec_of(state));
        benchmark::DoNotOptimize(column_minima(risks, points, exec_of(state)));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * hs.size()));
    label_exec(state);
}
BENCHMARK(BM_SurrogateRisks)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
