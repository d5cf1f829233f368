#include <benchmark/benchmark.h>

#include <random>

#include "skinspec/cube.hpp"
#include "skinspec/eval.hpp"
#include "skinspec/lda.hpp"
#include "skinspec/synth.hpp"

using namespace skinspec;

static void BM_FitLda(benchmark::State& state) {
  const auto n = state.range(0);
  const auto b = state.range(1);
  std::mt19937_64 gen(1);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x(n, b);
  std::vector<int> y(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    y[static_cast<std::size_t>(i)] = static_cast<int>(i % 3);
    for (Eigen::Index j = 0; j < b; ++j) x(i, j) = normal(gen) + y[static_cast<std::size_t>(i)];
  }
  for (auto _ : state) benchmark::DoNotOptimize(lda::fit_lda(x, y, {}));
}
BENCHMARK(BM_FitLda)->Args({300, 100})->Args({1000, 100})->Args({300, 400})->Unit(benchmark::kMillisecond);

static void BM_MedianSpectrum(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  std::vector<float> values(side * side * 100);
  for (auto& v : values) v = u(gen);
  const HsiCube cube(side, side, WavelengthGrid::uniform(500, 1000, 100), std::move(values));
  const AnnotationMask mask(side, side, std::vector<std::uint8_t>(side * side, 1));
  for (auto _ : state) benchmark::DoNotOptimize(median_spectrum(cube, mask, {}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(side * side * 100));
}
BENCHMARK(BM_MedianSpectrum)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_EvaluateSplit(benchmark::State& state) {
  const auto cohort = synth::generate_cohort(synth::scenario("separable", {{"master_seed", 1}})).cohort;
  eval::SplitPlan plan;
  plan.master_seed = 1;
  std::size_t i = 0;
  for (auto _ : state) {
    const auto split = eval::make_split(cohort, plan, i++ % 1000);
    benchmark::DoNotOptimize(eval::evaluate_split(cohort, split, plan));
  }
}
BENCHMARK(BM_EvaluateSplit)->Unit(benchmark::kMillisecond);

static void BM_GenerateCohort(benchmark::State& state) {
  const auto cfg = synth::scenario("separable", {{"master_seed", 1}});
  for (auto _ : state) benchmark::DoNotOptimize(synth::generate_cohort(cfg));
}
BENCHMARK(BM_GenerateCohort)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
