#pragma once

#include <cstdint>

#include "rif/engine.hpp"
#include "rif/stats.hpp"

namespace rif {

enum class EngineKind { Discrete, Continuous };

struct ReplicaOptions {
  EngineKind engine = EngineKind::Discrete;
  int threads = 1;
  GrowOptions grow;
};

// Independent replicas with counter-derived seeds, merged by a fold in
// replica order; the result is bit-identical regardless of thread layout or
// completion order.
EmpiricalSummary run_replicas(const WeightDistribution& dist, const FitnessModel& fm,
                              std::int64_t t_final, std::int64_t n_replicas,
                              std::uint64_t base_seed, const BinSet& bins,
                              std::int64_t k_max, const ReplicaOptions& opts = {});

}  // namespace rif
