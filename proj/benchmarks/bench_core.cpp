#include <benchmark/benchmark.h>

#include "aelab/amp.hpp"
#include "aelab/linalg.hpp"
#include "aelab/models.hpp"
#include "aelab/priors.hpp"
#include "aelab/training.hpp"

using namespace aelab;

static void BM_HaarSample(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  std::uint64_t s = 0;
  for (auto _ : state) benchmark::DoNotOptimize(EncoderMatrix::haar(d, d, {s++, 0}));
}
BENCHMARK(BM_HaarSample)->Arg(64)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);

static void BM_ExactLinearMse(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const EncoderMatrix B = EncoderMatrix::haar(d / 2, d, {1, 0});
  const Matrix A = B.matrix().transpose();
  const auto masks = sample_masks(d, 0.5, 8, {2, 0});
  for (auto _ : state) benchmark::DoNotOptimize(exact_linear_mse(A, B.matrix(), 0.5, masks));
}
BENCHMARK(BM_ExactLinearMse)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_AnalyticGradient(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const EncoderMatrix B = EncoderMatrix::haar(d / 2, d, {1, 0});
  const Matrix A = B.matrix().transpose();
  const auto masks = sample_masks(d, 0.5, 8, {2, 0});
  for (auto _ : state) benchmark::DoNotOptimize(analytic_gradient(A, B.matrix(), 0.5, masks));
}
BENCHMARK(BM_AnalyticGradient)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_MseMonteCarlo(benchmark::State& state) {
  const std::size_t d = 200;
  const EncoderMatrix B = EncoderMatrix::haar(d, d, {1, 0});
  const LinearDecoderAE model{B, B.matrix().transpose()};
  const Prior prior = Prior::sparse_rademacher(0.5);
  for (auto _ : state)
    benchmark::DoNotOptimize(mse_monte_carlo(model, prior, static_cast<std::size_t>(state.range(0)), {3, 0}));
}
BENCHMARK(BM_MseMonteCarlo)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_VampE1(benchmark::State& state) {
  double g = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(vamp_E1(g, 0.3));
    g = g < 10.0 ? g * 1.01 : 0.5;
  }
}
BENCHMARK(BM_VampE1);

static void BM_VampB1(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(vamp_B1(2.0, static_cast<std::size_t>(state.range(0)), {4, 0}));
}
BENCHMARK(BM_VampB1)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
