#include <benchmark/benchmark.h>

#include "thetalab/expand.hpp"
#include "thetalab/sampling.hpp"
#include "thetalab/symp.hpp"
#include "thetalab/theta.hpp"

namespace {

using namespace thetalab;

void BM_ThetaConstant(benchmark::State& state) {
  const int g = static_cast<int>(state.range(0));
  Rng rng(1);
  const auto tau = random_period_matrix(g, rng);
  const auto m = normal_form(g, 2);
  ThetaOptions opts;
  opts.precision = state.range(1) ? Precision::Extended : Precision::Double;
  for (auto _ : state) benchmark::DoNotOptimize(theta_constant(m, tau, opts));
}
BENCHMARK(BM_ThetaConstant)->ArgsProduct({{2, 3, 4, 5}, {0, 1}});

void BM_AllEvenConstants(benchmark::State& state) {
  const int g = static_cast<int>(state.range(0));
  Rng rng(2);
  const auto tau = random_period_matrix(g, rng);
  const auto evens = enumerate(g, {Parity::Even, std::nullopt});
  for (auto _ : state) benchmark::DoNotOptimize(theta_constants(evens, tau));
}
BENCHMARK(BM_AllEvenConstants)->DenseRange(2, 5);

void BM_Hessian(benchmark::State& state) {
  const int g = static_cast<int>(state.range(0));
  Rng rng(3);
  const auto tau = random_period_matrix(g, rng);
  const auto m = normal_form(g, 2);
  for (auto _ : state) benchmark::DoNotOptimize(hessian(m, tau));
}
BENCHMARK(BM_Hessian)->DenseRange(3, 5);

void BM_Bracket(benchmark::State& state) {
  const std::vector<int> idx = {1, 1, 2, 2, 3, 3, 4, 5};
  for (auto _ : state) benchmark::DoNotOptimize(bracket(idx, 5));
}
BENCHMARK(BM_Bracket);

void BM_HessianEntryExpansion(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(hessian_minor({1, 2, 3, 4}, {1, 2, 3, 5}, 5));
}
BENCHMARK(BM_HessianEntryExpansion);

void BM_EvenOrbit(benchmark::State& state) {
  const int g = static_cast<int>(state.range(0));
  const auto gens = generators(GeneratorSet::Gg, g);
  for (auto _ : state) benchmark::DoNotOptimize(orbit(Characteristic::zero(g), gens));
}
BENCHMARK(BM_EvenOrbit)->DenseRange(2, 6, 2);

}  // namespace
BENCHMARK_MAIN();
