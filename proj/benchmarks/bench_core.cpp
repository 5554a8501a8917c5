#include <benchmark/benchmark.h>

#include <random>

#include "saturation/crc.hpp"
#include "saturation/planner.hpp"
#include "saturation/survival.hpp"

namespace {

using namespace saturation;

InterviewSequence random_sequence(std::size_t n) {
  std::mt19937_64 rng(1);
  std::bernoulli_distribution bit(0.4);
  std::vector<std::size_t> v(n);
  for (auto& x : v) x = bit(rng) ? 1 + rng() % 3 : 0;
  return InterviewSequence(std::move(v));
}

ElicitationMatrix random_matrix(std::size_t rows, std::size_t codes) {
  std::mt19937_64 rng(2);
  std::bernoulli_distribution bit(0.1);
  std::vector<InterviewCodes> ivs;
  for (std::size_t r = 0; r < rows; ++r) {
    InterviewCodes iv{"iv" + std::to_string(r), {}};
    for (std::size_t k = 0; k < codes; ++k)
      if (bit(rng)) iv.codes.push_back("c" + std::to_string(k));
    ivs.push_back(std::move(iv));
  }
  return ElicitationMatrix::from_interviews(ivs);
}

void BM_KmEstimate(benchmark::State& state) {
  auto seq = random_sequence(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(km_estimate(seq));
}
BENCHMARK(BM_KmEstimate)->Range(16, 4096);

void BM_SaturationSummary(benchmark::State& state) {
  auto curve = km_estimate(random_sequence(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(saturation_summary(curve));
}
BENCHMARK(BM_SaturationSummary)->Range(16, 4096);

void BM_CrcSeries(benchmark::State& state) {
  auto m = random_matrix(static_cast<std::size_t>(state.range(0)), 200);
  for (auto _ : state) benchmark::DoNotOptimize(per_interview_series(m));
}
BENCHMARK(BM_CrcSeries)->Range(8, 512);

void BM_ImputeGrouped(benchmark::State& state) {
  std::vector<Group> groups;
  for (std::size_t g = 0; g < static_cast<std::size_t>(state.range(0)); ++g) groups.push_back({g * 6 + 1, g * 6 + 6, g % 7});
  GroupedCounts gc(groups);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(impute_grouped(gc, Seed{seed++}));
}
BENCHMARK(BM_ImputeGrouped)->Range(4, 1024);

}  // namespace

BENCHMARK_MAIN();
