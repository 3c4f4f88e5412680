#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rif/bins.hpp"
#include "rif/fitness.hpp"
#include "rif/weights.hpp"

namespace rif {

struct Tolerances {
  double max_abs = 0.01;       // per-cell degree deviation, k <= compare_k
  double tv = -1.0;            // truncated total variation; disabled if < 0
  double z_rel_err = -1.0;     // |Z_t/t - predicted| / predicted; disabled if < 0
  double profile_min = -1.0;   // required edge mass in the first epsilon window
  bool profile_trend = false;  // also require a positive Spearman trend in that window
  double leaf_abs = -1.0;      // per-bin |leaf fraction - mu(B)| (degenerate runs)
  std::int64_t compare_k = 5;  // degree cutoff for max_abs
  double solve_tol = 1e-10;
  double alpha_scale = 1.0;    // validation knob: scales the law constant
};

struct RunConfig {
  int version = 1;
  WeightDistribution weight = WeightDistribution::point_mass(1.0);
  FitnessModel fitness = FitnessModel::constant_in_degree(Expr::constant(1.0), 1);
  std::string experiment;  // optional; must match the subcommand when set
  std::int64_t t_final = 0;
  std::int64_t replicas = 1;
  std::optional<std::uint64_t> seed;
  int threads = 0;  // 0: decide from --threads / RIF_THREADS / hardware
  BinSet bins;
  std::int64_t k_max = 10000;
  std::vector<double> epsilons;
  std::string output_dir = ".";
  std::string engine = "discrete";  // or "continuous"
  Tolerances tol;
  std::vector<double> phase_c;

  std::string raw_text;       // exact file contents, used for the hash
  std::uint64_t config_hash = 0;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

// FNV-1a 64-bit over the raw bytes.
std::uint64_t fnv1a64(const std::string& bytes);
std::string hash_hex(std::uint64_t h);

}  // namespace rif
