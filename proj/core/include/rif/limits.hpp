#pragma once

#include <cstdint>
#include <vector>

#include "rif/bins.hpp"
#include "rif/fitness.hpp"
#include "rif/malthus.hpp"
#include "rif/weights.hpp"

namespace rif {

// Truncated limiting degree table. p[k][j] is the limit of N_k(t, B_j)/(ell*t)
// for k <= k_max; tail_mass[j] is the remaining probability beyond k_max and
// edge_tail[j] the exact tail correction for the telescoping edge identity
// sum_k k*ell*p_k(B) + edge_tail(B) = continuous edge mass(B).
struct DegreeLawTable {
  BinSet bins;
  std::int64_t k_max = 0;
  double regime_constant = 0.0;  // alpha under C1, g(w*) in the condensation phase
  std::vector<std::vector<double>> p;
  std::vector<double> tail_mass;
  std::vector<double> edge_tail;

  double row_sum(std::int64_t k) const;
  double total_mass() const;  // sum over k <= k_max and cells
};

// Limiting edge measure: continuous density part per cell plus an atom at w*.
struct EdgeLawMeasure {
  BinSet bins;
  Regime regime = Regime::C1;
  std::vector<double> continuous;
  double atom_at_wstar = 0.0;

  double total() const;
};

DegreeLawTable degree_law(const WeightDistribution& dist, const FitnessModel& fm,
                          const RegimeReport& report, const BinSet& bins,
                          std::int64_t k_max, const SolveOptions& opts = {});

EdgeLawMeasure edge_law(const WeightDistribution& dist, const FitnessModel& fm,
                        const RegimeReport& report, const BinSet& bins,
                        const SolveOptions& opts = {});

// Degenerate regime: the limiting leaf law is mu itself, reported per bin.
std::vector<double> degenerate_law(const WeightDistribution& dist, const BinSet& bins);

// Bianconi's evolving-Cayley observable: p_0(B) = E[1/(exp(beta*(e - mu_F)) + 1) 1_B]
// with exp(beta*mu_F) = alpha.
std::vector<double> fermi_dirac_law(const WeightDistribution& energies, double beta,
                                    double alpha, const BinSet& bins,
                                    const SolveOptions& opts = {});
// Model-checked variant: fm must be a Cayley model with g = exp(beta*.) or constant.
std::vector<double> fermi_dirac_law(const WeightDistribution& energies,
                                    const FitnessModel& fm, double alpha,
                                    const BinSet& bins, const SolveOptions& opts = {});

// Stirling exponent of the degree power law at weight w: 1 + c/g(w).
double power_law_exponent(const FitnessModel& fm, const RegimeReport& report, double w);

}  // namespace rif
