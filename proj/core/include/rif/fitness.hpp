#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rif/expr.hpp"
#include "rif/weights.hpp"

namespace rif {

enum class FitnessKind { Gpaf, Cayley, ConstantInDegree, Tabular };
enum class TabularExtension { Clamp, Zero };

// Optional growth envelope f(k, w) <= C*k + phi(w); when present it is
// verified on a grid and justifies reading the Malthusian parameter as the
// partition-function limit.
struct Envelope {
  double growth_c;
  Expr phi;
};

// Exact affine description of the fitness tail in k at a fixed weight:
// f(i, w) = slope*i + intercept for all i >= from_k. Every family in scope
// has one, which is what makes series tails certifiable.
struct AffineTail {
  std::int64_t from_k;
  double slope;
  double intercept;
};

class FitnessModel {
 public:
  static FitnessModel gpaf(Expr g, Expr h, int ell);
  static FitnessModel cayley(Expr g, int ell);
  static FitnessModel constant_in_degree(Expr g, int ell);
  static FitnessModel tabular(std::vector<Expr> rows, TabularExtension ext, int ell);

  double eval(std::int64_t k, double w) const;
  bool is_dead(std::int64_t k, double w) const { return eval(k, w) == 0.0; }

  FitnessKind kind() const { return kind_; }
  int ell() const { return ell_; }
  const Expr& g() const { return g_; }
  const Expr& h() const { return h_; }
  const std::vector<Expr>& rows() const { return rows_; }
  TabularExtension extension() const { return extension_; }

  std::optional<Envelope> envelope;

  // Dies at degree k*ell: Cayley beyond the first event, tabular zero rows.
  bool eventually_dead(double w) const;

  AffineTail affine_tail(double w) const;

  // mu-dependent invariants: f >= 0 on a grid, f(0, .) > 0 mu-a.e., GPAF
  // monotonicity of g and h, envelope check. Throws ModelViolation.
  void validate_against(const WeightDistribution& mu) const;

  FitnessModel with_h(Expr h) const;  // same g/ell, substituted h (phase sweeps)

 private:
  FitnessModel() = default;

  FitnessKind kind_ = FitnessKind::Gpaf;
  int ell_ = 1;
  Expr g_ = Expr::constant(1.0);
  Expr h_ = Expr::constant(0.0);
  std::vector<Expr> rows_;
  TabularExtension extension_ = TabularExtension::Clamp;
};

// Essential supremum of expr(W) with W ~ mu (exact for this expression set:
// per-piece interval bounds plus atom evaluations).
double esssup_on(const Expr& e, const WeightDistribution& mu);

}  // namespace rif
