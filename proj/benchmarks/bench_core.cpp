// Microbenchmarks for the hot paths: wavelet expansion, survival evaluation,
// dense generator assembly, and single-path sampling.
#include <benchmark/benchmark.h>

#include "ultrarelax/dense.hpp"
#include "ultrarelax/mc.hpp"
#include "ultrarelax/scenario.hpp"
#include "ultrarelax/spectral.hpp"

namespace {

using namespace ultrarelax;

LandscapeModel bench_model() {
  const auto cfg = default_custom_config();
  return build_model(cfg, build_schedule(cfg.schedule));
}

LandscapeModel bench_glass_model() {
  const auto cfg = default_glass_config();
  TemperatureSchedule schedule(cfg.schedule.start_temp_k);
  schedule.exp_approach_to(200.0, cfg.glass_quench.tau_s, cfg.glass_quench.quench_end_s);
  return build_model(cfg, schedule);
}

void BM_ExpandBallIndicator(benchmark::State& state) {
  const auto model = bench_model();
  BallSpec ball;
  ball.basin = 0;
  ball.center = {0, 0, 0};
  ball.scale = -static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto expanded = expand_ball_indicator(ball, model);
    benchmark::DoNotOptimize(expanded);
  }
}
BENCHMARK(BM_ExpandBallIndicator)->Arg(1)->Arg(2)->Arg(3);

void BM_SurvivalSeries(benchmark::State& state) {
  const auto model = bench_glass_model();
  BallSpec ball;
  ball.basin = 0;
  ball.center = {0};
  ball.scale = -1;
  std::vector<double> grid;
  for (int i = 0; i <= 32; ++i) grid.push_back(1e-2 * i / 32.0);
  for (auto _ : state) {
    auto series = survival_probability(ball, model, grid);
    benchmark::DoNotOptimize(series);
  }
}
BENCHMARK(BM_SurvivalSeries);

void BM_DenseGeneratorBuild(benchmark::State& state) {
  const auto model = bench_glass_model();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto q = build_dense_generator(model, n, 5e-4);
    benchmark::DoNotOptimize(q);
  }
}
BENCHMARK(BM_DenseGeneratorBuild)->Arg(2)->Arg(3);

void BM_McSamplePath(benchmark::State& state) {
  const auto model = bench_model();
  BallSpec ball;
  ball.basin = 0;
  ball.center = {0};
  ball.scale = -1;
  const double bound = mc_rate_bound(model, 2, 0.0, 0.05, {});
  std::uint64_t index = 0;
  for (auto _ : state) {
    auto path = mc_sample_path(model, ball, 2, 0.05, 1, index++, bound);
    benchmark::DoNotOptimize(path);
  }
}
BENCHMARK(BM_McSamplePath);

void BM_IntegratedGamma(benchmark::State& state) {
  const auto model = bench_glass_model();
  const RateFn outflow = model.exchange_rate(1, 0);
  for (auto _ : state) {
    const double value = integrated_gamma(model.profiles[0], outflow, -1, 0.0, 1e-2);
    benchmark::DoNotOptimize(value);
  }
}
BENCHMARK(BM_IntegratedGamma);

}  // namespace

BENCHMARK_MAIN();
