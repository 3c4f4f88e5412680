#include "rif/replicas.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "rif/errors.hpp"
#include "rif/rng.hpp"

namespace rif {

EmpiricalSummary run_replicas(const WeightDistribution& dist, const FitnessModel& fm,
                              std::int64_t t_final, std::int64_t n_replicas,
                              std::uint64_t base_seed, const BinSet& bins,
                              std::int64_t k_max, const ReplicaOptions& opts) {
  if (n_replicas < 1) throw OutOfRange("need at least one replica");

  std::vector<std::optional<EmpiricalSummary>> results(
      static_cast<std::size_t>(n_replicas));
  std::atomic<std::int64_t> next{0};
  std::mutex err_mu;
  std::exception_ptr first_error;

  auto worker = [&]() {
    while (true) {
      const std::int64_t i = next.fetch_add(1);
      if (i >= n_replicas) return;
      try {
        const std::uint64_t seed = derive_seed(base_seed, static_cast<std::uint64_t>(i));
        auto [tree, traj] =
            opts.engine == EngineKind::Discrete
                ? grow_discrete(dist, fm, t_final, seed, opts.grow)
                : grow_continuous(dist, fm, t_final, seed, opts.grow);
        results[static_cast<std::size_t>(i)] =
            summarize(tree, traj, bins, k_max, opts.grow.profile_windows);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const int nthreads = std::max(1, std::min<int>(opts.threads,
                                                 static_cast<int>(n_replicas)));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  // Fold in replica order for a deterministic merged result.
  EmpiricalSummary merged = *results[0];
  for (std::int64_t i = 1; i < n_replicas; ++i)
    merged = merge(merged, *results[static_cast<std::size_t>(i)]);
  return merged;
}

}  // namespace rif
