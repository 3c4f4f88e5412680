#include <benchmark/benchmark.h>

#include "rif/engine.hpp"

namespace {

// Whole-run throughput in attachment events per second.
void BM_GrowDiscretePort(benchmark::State& state) {
  const auto t = static_cast<std::int64_t>(state.range(0));
  auto dist = rif::WeightDistribution::point_mass(1.0);
  auto fm = rif::FitnessModel::gpaf(rif::Expr::constant(1.0), rif::Expr::constant(1.0), 1);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    auto [tree, traj] = rif::grow_discrete(dist, fm, t, seed++);
    benchmark::DoNotOptimize(tree.partition);
  }
  state.SetItemsProcessed(state.iterations() * t);
}
BENCHMARK(BM_GrowDiscretePort)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_GrowDiscreteBianconi(benchmark::State& state) {
  const auto t = static_cast<std::int64_t>(state.range(0));
  auto dist = rif::WeightDistribution::uniform(0.0, 1.0);
  auto fm = rif::FitnessModel::gpaf(rif::Expr::identity(), rif::Expr::identity(), 1);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    auto [tree, traj] = rif::grow_discrete(dist, fm, t, seed++);
    benchmark::DoNotOptimize(tree.partition);
  }
  state.SetItemsProcessed(state.iterations() * t);
}
BENCHMARK(BM_GrowDiscreteBianconi)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_GrowContinuousPort(benchmark::State& state) {
  const auto t = static_cast<std::int64_t>(state.range(0));
  auto dist = rif::WeightDistribution::point_mass(1.0);
  auto fm = rif::FitnessModel::gpaf(rif::Expr::constant(1.0), rif::Expr::constant(1.0), 1);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    auto [tree, traj] = rif::grow_continuous(dist, fm, t, seed++);
    benchmark::DoNotOptimize(tree.partition);
  }
  state.SetItemsProcessed(state.iterations() * t);
}
BENCHMARK(BM_GrowContinuousPort)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace
