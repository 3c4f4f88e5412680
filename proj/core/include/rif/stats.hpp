#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rif/bins.hpp"
#include "rif/engine.hpp"
#include "rif/limits.hpp"

namespace rif {

// Binned empirical state of one or several merged replicas. counts[k][j] is
// the number of vertices of out-degree k*ell with weight in cell j; vertices
// beyond k_max land in the overflow row with their exact edge total kept.
struct EmpiricalSummary {
  BinSet bins;
  std::int64_t k_max = 0;
  int ell = 1;
  std::int64_t t = 0;
  std::int64_t replicas = 1;

  std::vector<std::vector<double>> counts;
  std::vector<double> overflow_count;
  std::vector<double> overflow_edges;  // sum of out-degrees of overflow vertices
  std::vector<double> edge_mass;       // Xi(t, B_j): all out-degrees per cell

  // Replica-averaged trajectory (identical checkpoint grid across replicas).
  std::vector<Checkpoint> checkpoints;
  std::vector<double> window_lows;  // lower edges matching checkpoint window_mass

  double vertex_total() const;
  double edge_total() const;
};

EmpiricalSummary summarize(const TreeState& tree, const BinSet& bins,
                           std::int64_t k_max);
EmpiricalSummary summarize(const TreeState& tree, const GrowthTrajectory& traj,
                           const BinSet& bins, std::int64_t k_max,
                           const std::vector<double>& window_lows = {});

// Associative, commutative merge of equally-shaped summaries.
EmpiricalSummary merge(const EmpiricalSummary& a, const EmpiricalSummary& b);

struct DegreeComparison {
  double max_abs = 0.0;        // over k <= cutoff, all cells
  double tv = 0.0;             // truncated table + tail row as its own cell
  double max_std_residual = 0.0;
  std::int64_t cutoff = 0;
  // Flattened rows for CSV: (k, cell, empirical, theoretical, residual).
  struct Cell {
    std::int64_t k;
    std::size_t cell;
    double empirical;
    double theoretical;
    double std_residual;
  };
  std::vector<Cell> cells;
};

DegreeComparison compare_degree(const EmpiricalSummary& emp, const DegreeLawTable& law,
                                std::int64_t cutoff = -1);

// Empirical edge mass in the shrinking windows [w* - eps, w*].
std::vector<std::pair<double, double>> condensation_profile(
    const EmpiricalSummary& emp, double wstar, const std::vector<double>& epsilons);

struct PartitionDiagnostic {
  double final_value = 0.0;     // Z_t/t at the last checkpoint
  double rel_err = 0.0;         // against the prediction (finite case)
  double trend = 0.0;           // Spearman of |error| vs t over last checkpoints
  double growth_exponent = 0.0; // log-log slope when the prediction is +inf
  bool predicted_infinite = false;
};

PartitionDiagnostic partition_diagnostic(const EmpiricalSummary& emp, double predicted);
PartitionDiagnostic partition_diagnostic(const std::vector<Checkpoint>& checkpoints,
                                         double predicted);

// N_0(t, B_j)/t per cell (normalized by t, not ell*t: the leaf-law convention).
std::vector<double> leaf_fraction(const EmpiricalSummary& emp);

struct TailFit {
  double slope = 0.0;
  double std_error = 0.0;
  std::int64_t cells_used = 0;
};

TailFit tail_exponent(const EmpiricalSummary& emp, std::size_t cell, std::int64_t k_lo,
                      std::int64_t k_hi);

// Spearman rank correlation (ties broken by order; n >= 2).
double spearman(const std::vector<double>& x, const std::vector<double>& y);

// Upper-tail p-value of the chi-square distribution with df degrees of freedom.
double chi_square_pvalue(double statistic, double df);

// One-sample goodness of fit against expected cell probabilities.
double chi_square_gof_pvalue(const std::vector<double>& observed,
                             const std::vector<double>& expected_probs);

// Two-sample chi-square homogeneity test over matching histograms.
double chi_square_two_sample_pvalue(const std::vector<double>& a,
                                    const std::vector<double>& b);

}  // namespace rif
