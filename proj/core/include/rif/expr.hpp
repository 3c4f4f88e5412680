#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rif {

// Closed set of scalar functions of the weight, rich enough for every model
// family in scope (affine fitness components, Bianconi's exp(beta*w), the
// reciprocal 1/(c-w) used by degenerate examples) while staying serializable.
class Expr {
 public:
  enum class Kind : std::uint8_t { Const, Id, Affine, Power, Recip, Exp, Min, Max, Scale };

  static Expr constant(double v);
  static Expr identity();
  static Expr affine(double a, double b);   // a*w + b
  static Expr power(double p);              // w^p
  static Expr recip(double c);              // 1/(c - w)
  static Expr exponential(double beta);     // exp(beta*w)
  static Expr min_of(Expr a, Expr b);
  static Expr max_of(Expr a, Expr b);
  static Expr scaled(double factor, Expr inner);  // factor * inner(w)

  double operator()(double w) const { return eval(w); }
  double eval(double w) const;

  // Supremum / infimum of the expression over [lo, hi] (hi may be +inf).
  // Exact for this expression set; returns +-inf when a pole lies inside.
  double sup_on(double lo, double hi) const;
  double inf_on(double lo, double hi) const;

  // True if some subexpression has a pole in [lo, hi].
  bool has_pole_in(double lo, double hi) const;
  // Location of the pole nearest to `near` within [lo, hi]; requires has_pole_in.
  double pole_in(double lo, double hi) const;

  enum class Monotonicity { NonDecreasing, NonIncreasing, Neither };
  // Grid check on [lo, hi] (n points); constants count as both directions.
  Monotonicity monotonicity_on(double lo, double hi, int n = 257) const;

  Kind kind() const { return kind_; }
  double p0() const { return p0_; }
  double p1() const { return p1_; }
  const std::vector<Expr>& children() const { return children_; }

  std::string to_json_string() const;
  static Expr from_json_string(const std::string& text);

  bool operator==(const Expr& other) const;

 private:
  Expr(Kind k, double p0, double p1) : kind_(k), p0_(p0), p1_(p1) {}

  Kind kind_ = Kind::Const;
  double p0_ = 0.0;
  double p1_ = 0.0;
  std::vector<Expr> children_;
};

}  // namespace rif
