#include <benchmark/benchmark.h>

#include <vector>

#include "rif/rng.hpp"
#include "rif/sampler.hpp"

namespace {

// update + sample on n entries; the per-op complexity target is O(log n).
void BM_UpdateSample(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  rif::SplitMix64 rng(4242);
  std::vector<double> w(n);
  for (auto& x : w) x = 0.01 + rng.next_unit();
  rif::WeightedIndex idx(w);
  for (auto _ : state) {
    const std::size_t j = rng.next_u64() % n;
    idx.update(j, 0.01 + rng.next_unit());
    benchmark::DoNotOptimize(idx.sample(rng.next_unit()));
  }
  state.SetComplexityN(static_cast<benchmark::IterationCount>(n));
}
BENCHMARK(BM_UpdateSample)->RangeMultiplier(10)->Range(1000, 1000000)->Complexity();

void BM_Append(benchmark::State& state) {
  rif::SplitMix64 rng(77);
  rif::WeightedIndex idx(std::vector<double>{1.0});
  for (auto _ : state) idx.append(0.01 + rng.next_unit());
}
BENCHMARK(BM_Append);

}  // namespace
