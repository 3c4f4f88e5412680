#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rif/fitness.hpp"
#include "rif/weights.hpp"

namespace rif {

// Flat-array tree state. Vertices are labelled in arrival order, ell per
// event; parents[v] < v for v > 0 and ell divides every out-degree.
struct TreeState {
  std::vector<std::uint32_t> parents;  // parents[0] is 0 (root sentinel)
  std::vector<std::uint32_t> out_degree;
  std::vector<double> weights;
  double partition = 0.0;  // Z_t, maintained incrementally
  std::int64_t t = 0;
  int ell = 1;
  double clock_time = 0.0;  // continuous engine only: time of the last birth

  std::size_t vertex_count() const { return weights.size(); }
  double recompute_partition(const FitnessModel& fm) const;
};

struct Checkpoint {
  std::int64_t t = 0;
  double z_over_t = 0.0;
  double leaf_count = 0.0;
  std::vector<double> window_mass;  // edge mass in [lo_i, w*] / (ell*t)
};

struct GrowthTrajectory {
  std::vector<Checkpoint> checkpoints;
};

struct GrowOptions {
  std::vector<double> profile_windows;  // lower edges of top-weight windows
  std::size_t max_vertices = std::size_t{1} << 27;
};

// Discrete-time growth: each step samples a parent with probability
// f(outdeg/ell, W)/Z_t and appends ell fresh-weight children. Deterministic
// for a fixed seed: the per-step draw order is one uniform for the parent,
// then the ell child weights.
std::pair<TreeState, GrowthTrajectory> grow_discrete(const WeightDistribution& dist,
                                                     const FitnessModel& fm,
                                                     std::int64_t t_final,
                                                     std::uint64_t seed,
                                                     const GrowOptions& opts = {});

// Continuous-time embedding: exponential clocks at rate f(k, W), regenerated
// on every degree change; the family tree is read at birth events. Same
// outputs as the discrete engine after t_final_events births.
std::pair<TreeState, GrowthTrajectory> grow_continuous(const WeightDistribution& dist,
                                                       const FitnessModel& fm,
                                                       std::int64_t t_final_events,
                                                       std::uint64_t seed,
                                                       const GrowOptions& opts = {});

// Geometrically spaced checkpoint times ceil(1.2^j), deduplicated, plus t_final.
std::vector<std::int64_t> checkpoint_times(std::int64_t t_final);

// Edge-list export, one "child parent" line per edge after a provenance header.
void write_edge_list(const TreeState& tree, const std::string& path,
                     const std::string& header_comment);

}  // namespace rif
