#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rif/bins.hpp"
#include "rif/quadrature.hpp"
#include "rif/rng.hpp"

namespace rif {

enum class WeightKind {
  PointMass,
  FiniteAtoms,
  Uniform,
  PolynomialDensity,
  Exponential,
  TruncatedPlus,
  TruncatedMinus,
};

struct Atom {
  double value;
  double prob;
};

// A functional of the weight together with the hints quadrature needs:
// breakpoints (kinks/jumps, e.g. bin edges) and at most one singular point.
struct WeightFunctional {
  std::function<double(double)> fn;
  std::vector<double> breakpoints;
  std::optional<double> singular_at;

  WeightFunctional() = default;
  WeightFunctional(std::function<double(double)> f) : fn(std::move(f)) {}
};

// phi restricted to B: w -> phi(w) * 1_B(w), with B's edges as breakpoints.
WeightFunctional restrict_indicator(const BinSet& B, WeightFunctional phi);

// The weight measure mu. Immutable after construction; safe to share across
// threads. Expectations are exact over atoms and Gauss-Legendre over density
// pieces; divergent nonnegative expectations come back as +infinity.
class WeightDistribution {
 public:
  static WeightDistribution point_mass(double c);
  static WeightDistribution finite_atoms(std::vector<Atom> atoms);
  static WeightDistribution uniform(double a, double b);
  static WeightDistribution polynomial_density(std::vector<double> coeffs, double a,
                                               double b);
  static WeightDistribution exponential(double rate);
  static WeightDistribution truncated_plus(const WeightDistribution& base, double eps);
  static WeightDistribution truncated_minus(const WeightDistribution& base, double eps);

  WeightKind kind() const { return kind_; }
  double support_sup() const { return support_sup_; }
  double support_inf() const { return support_inf_; }
  bool has_atom_at_sup() const { return has_atom_at_sup_; }

  double sample(SplitMix64& rng) const;

  double expect(const WeightFunctional& phi, const QuadratureSpec& spec = {}) const;
  double expect(const std::function<double(double)>& phi,
                const QuadratureSpec& spec = {}) const {
    return expect(WeightFunctional(phi), spec);
  }

  // mu(B), exact for atoms and analytic for the density families.
  double measure(const BinSet& B) const;

  // Total mass of all atoms (0 for pure densities).
  double atom_mass() const;
  const std::vector<Atom>& atoms() const { return atoms_; }

  // Only valid for the truncated kinds.
  const WeightDistribution& truncation_base() const { return *trunc_base_; }
  double truncation_eps() const { return trunc_eps_; }

  std::string to_json_string() const;
  static WeightDistribution from_json_string(const std::string& text);

  struct DensityPiece {
    double lo;
    double hi;                  // finite; unbounded tails carry their own cap
    std::vector<double> poly;   // pdf coefficients, empty if exponential tail
    double exp_rate = 0.0;      // pdf = exp_rate * exp(-exp_rate * w) when poly empty
    double pdf(double w) const;
    double mass(double lo_cut, double hi_cut) const;  // closed-form integral of pdf
  };
  const std::vector<DensityPiece>& pieces() const { return pieces_; }

 private:
  WeightDistribution() = default;
  void finalize();  // sorts atoms, computes support and sampling tables

  WeightKind kind_ = WeightKind::PointMass;
  std::vector<Atom> atoms_;
  std::vector<DensityPiece> pieces_;
  double support_inf_ = 0.0;
  double support_sup_ = 0.0;
  bool has_atom_at_sup_ = false;

  // Sampling tables: cumulative probability over [atoms..., pieces...].
  std::vector<double> cum_;
  double total_mass_ = 1.0;

  std::shared_ptr<const WeightDistribution> trunc_base_;
  double trunc_eps_ = 0.0;
};

}  // namespace rif
