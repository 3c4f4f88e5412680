#include "rif/fitness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rif/errors.hpp"

namespace rif {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_ell(int ell) {
  if (ell < 1) throw BadConfig("ell must be a positive integer");
}
}  // namespace

FitnessModel FitnessModel::gpaf(Expr g, Expr h, int ell) {
  require_ell(ell);
  FitnessModel f;
  f.kind_ = FitnessKind::Gpaf;
  f.ell_ = ell;
  f.g_ = std::move(g);
  f.h_ = std::move(h);
  return f;
}

FitnessModel FitnessModel::cayley(Expr g, int ell) {
  require_ell(ell);
  FitnessModel f;
  f.kind_ = FitnessKind::Cayley;
  f.ell_ = ell;
  f.g_ = std::move(g);
  return f;
}

FitnessModel FitnessModel::constant_in_degree(Expr g, int ell) {
  require_ell(ell);
  FitnessModel f;
  f.kind_ = FitnessKind::ConstantInDegree;
  f.ell_ = ell;
  f.g_ = std::move(g);
  return f;
}

FitnessModel FitnessModel::tabular(std::vector<Expr> rows, TabularExtension ext,
                                   int ell) {
  require_ell(ell);
  if (rows.empty()) throw BadConfig("tabular fitness needs at least one row");
  FitnessModel f;
  f.kind_ = FitnessKind::Tabular;
  f.ell_ = ell;
  f.rows_ = std::move(rows);
  f.extension_ = ext;
  return f;
}

FitnessModel FitnessModel::with_h(Expr h) const {
  if (kind_ != FitnessKind::Gpaf) throw NotGpaf("with_h applies to GPAF models only");
  FitnessModel f = *this;
  f.h_ = std::move(h);
  return f;
}

double FitnessModel::eval(std::int64_t k, double w) const {
  switch (kind_) {
    case FitnessKind::Gpaf:
      return g_.eval(w) * static_cast<double>(k) + h_.eval(w);
    case FitnessKind::Cayley:
      return k == 0 ? g_.eval(w) : 0.0;
    case FitnessKind::ConstantInDegree:
      return g_.eval(w);
    case FitnessKind::Tabular: {
      const auto last = static_cast<std::int64_t>(rows_.size()) - 1;
      if (k <= last) return rows_[static_cast<std::size_t>(k)].eval(w);
      return extension_ == TabularExtension::Clamp ? rows_.back().eval(w) : 0.0;
    }
  }
  return 0.0;
}

bool FitnessModel::eventually_dead(double w) const {
  switch (kind_) {
    case FitnessKind::Cayley:
      return true;
    case FitnessKind::Tabular:
      if (extension_ == TabularExtension::Zero) return true;
      return rows_.back().eval(w) == 0.0;
    case FitnessKind::Gpaf:
      return g_.eval(w) == 0.0 && h_.eval(w) == 0.0;
    case FitnessKind::ConstantInDegree:
      return g_.eval(w) == 0.0;
  }
  return false;
}

AffineTail FitnessModel::affine_tail(double w) const {
  switch (kind_) {
    case FitnessKind::Gpaf:
      return {0, g_.eval(w), h_.eval(w)};
    case FitnessKind::Cayley:
      return {1, 0.0, 0.0};
    case FitnessKind::ConstantInDegree:
      return {0, 0.0, g_.eval(w)};
    case FitnessKind::Tabular: {
      const auto k0 = static_cast<std::int64_t>(rows_.size());
      const double tail =
          extension_ == TabularExtension::Clamp ? rows_.back().eval(w) : 0.0;
      return {k0, 0.0, tail};
    }
  }
  return {0, 0.0, 0.0};
}

void FitnessModel::validate_against(const WeightDistribution& mu) const {
  const double lo = mu.support_inf();
  const double hi = std::isfinite(mu.support_sup())
                        ? mu.support_sup()
                        : std::max(1.0, lo) * 1e3;

  // Probe weights: atoms plus an interior grid across the density support
  // (the endpoints themselves are mu-null for a density).
  std::vector<double> ws;
  for (const auto& a : mu.atoms()) ws.push_back(a.value);
  if (!mu.pieces().empty()) {
    for (int i = 0; i < 65; ++i)
      ws.push_back(lo + (hi - lo) * (static_cast<double>(i) + 0.5) / 65.0);
  }

  for (double w : ws) {
    if (!(eval(0, w) > 0.0))
      throw ModelViolation("f(0, w) must be positive on the weight support (w = " +
                           std::to_string(w) + ")");
    for (std::int64_t k = 0; k < 64; ++k) {
      const double v = eval(k, w);
      if (std::isnan(v) || v < 0.0)
        throw ModelViolation("fitness must be nonnegative (k = " + std::to_string(k) +
                             ", w = " + std::to_string(w) + ")");
    }
  }

  if (kind_ == FitnessKind::Gpaf) {
    if (g_.monotonicity_on(lo, hi) == Expr::Monotonicity::Neither)
      throw ModelViolation("GPAF g must be monotone on the weight support");
    if (h_.monotonicity_on(lo, hi) == Expr::Monotonicity::Neither)
      throw ModelViolation("GPAF h must be monotone on the weight support");
  }

  if (envelope) {
    for (double w : ws) {
      const double phi_w = envelope->phi.eval(w);
      for (std::int64_t k = 0; k < 64; ++k) {
        if (eval(k, w) > envelope->growth_c * static_cast<double>(k) + phi_w + 1e-12)
          throw ModelViolation("declared envelope C*k + phi(w) does not bound f");
      }
    }
  }
}

double esssup_on(const Expr& e, const WeightDistribution& mu) {
  double sup = -kInf;
  for (const auto& a : mu.atoms()) sup = std::max(sup, e.eval(a.value));
  for (const auto& p : mu.pieces()) sup = std::max(sup, e.sup_on(p.lo, p.hi));
  if (mu.kind() == WeightKind::Exponential)
    sup = std::max(sup, e.sup_on(0.0, kInf));
  return sup;
}

}  // namespace rif
