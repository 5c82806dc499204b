#include "rank1check/agreement.hpp"
#include "rank1check/estimate.hpp"
#include "rank1check/generators.hpp"
#include "rank1check/oracles.hpp"
#include "rank1check/spectral.hpp"

#include <benchmark/benchmark.h>

using namespace rank1check;

namespace {

BinaryTensor corrupted(const Shape& shape, std::uint64_t seed) {
  return generate(GeneratorSpec{GeneratorKind::kCorruptedRate, shape, seed, 0.125, 0, std::nullopt, 0});
}

void BM_TrialThroughput(benchmark::State& state) {
  const auto kind = static_cast<TestKind>(state.range(0));
  const auto f = corrupted(Shape({8, 8, 8, 8}), 1);
  Rng rng(7);
  std::uint64_t rejections = 0;
  for (auto _ : state) {
    rejections += trial_accepts(f, sample_randomness(kind, f.shape(), rng)) ? 0 : 1;
  }
  benchmark::DoNotOptimize(rejections);
  state.SetItemsProcessed(state.iterations());
  state.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_TrialThroughput)->DenseRange(0, 2)->Arg(4);

void BM_EstimateRejection(benchmark::State& state) {
  const auto f = corrupted(Shape({4, 4, 4}), 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_rejection(f, TestKind::kShapka, 100000, 3, 1).rejections);
  }
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_EstimateRejection)->Unit(benchmark::kMillisecond);

void BM_ExactRejection(benchmark::State& state) {
  const auto kind = static_cast<TestKind>(state.range(0));
  const auto f = corrupted(Shape({3, 3, 3}), 4);
  const Oracle oracle;
  for (auto _ : state) benchmark::DoNotOptimize(oracle.exact_rejection(f, kind).rejecting);
  state.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_ExactRejection)->DenseRange(0, 2)->Arg(4)->Unit(benchmark::kMicrosecond);

void BM_NearestDirectSum(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto f = corrupted(Shape({n, n, n}), 5);
  const Oracle oracle;
  for (auto _ : state) benchmark::DoNotOptimize(oracle.nearest_direct_sum(f).distance);
}
BENCHMARK(BM_NearestDirectSum)->DenseRange(2, 5)->Unit(benchmark::kMicrosecond);

void BM_NearestAffine(benchmark::State& state) {
  const auto g = corrupted(Shape::binary_cube(static_cast<std::size_t>(state.range(0))), 6);
  const Oracle oracle;
  for (auto _ : state) benchmark::DoNotOptimize(oracle.nearest_affine(g).distance);
}
BENCHMARK(BM_NearestAffine)->DenseRange(4, 10, 2)->Unit(benchmark::kMicrosecond);

void BM_PluralityDecode(benchmark::State& state) {
  const DPShape shape(std::vector<std::size_t>(4, 5), 3);
  std::vector<std::vector<Symbol>> comps(4, std::vector<Symbol>{0, 1, 2, 0, 1});
  const auto g = DPFunction::direct_product(shape, comps);
  for (auto _ : state) benchmark::DoNotOptimize(dp_plurality_decode(g).agreement);
}
BENCHMARK(BM_PluralityDecode)->Unit(benchmark::kMicrosecond);

void BM_VerifySpectrum(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto g = build_skeleton(std::vector<std::size_t>(5, n));
  for (auto _ : state) benchmark::DoNotOptimize(verify_spectrum(g).max_residual);
}
BENCHMARK(BM_VerifySpectrum)->Arg(3)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
