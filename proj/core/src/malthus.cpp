#include "rif/malthus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "rif/errors.hpp"

namespace rif {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// Weight at which a monotone g attains its essential supremum (support
// endpoint). The condensation formulas put the atom there.
double argmax_endpoint(const Expr& g, const WeightDistribution& dist) {
  const double lo = dist.support_inf();
  const double hi = dist.support_sup();
  if (!std::isfinite(hi)) return hi;
  return g.eval(hi) >= g.eval(lo) ? hi : lo;
}

// Point where the series integrand may blow up: a pole of any constituent
// expression inside the support closure, else the esssup end of g for GPAF.
std::optional<double> series_singularity(const FitnessModel& fm,
                                         const WeightDistribution& dist) {
  const double lo = dist.support_inf();
  const double hi = dist.support_sup();
  if (!std::isfinite(hi)) return std::nullopt;
  std::vector<const Expr*> parts;
  switch (fm.kind()) {
    case FitnessKind::Gpaf:
      parts = {&fm.g(), &fm.h()};
      break;
    case FitnessKind::Cayley:
    case FitnessKind::ConstantInDegree:
      parts = {&fm.g()};
      break;
    case FitnessKind::Tabular:
      for (const auto& r : fm.rows()) parts.push_back(&r);
      break;
  }
  const double margin = 0.5 * (hi - lo);
  for (const Expr* e : parts)
    if (e->has_pole_in(lo, hi + margin)) return std::min(e->pole_in(lo, hi + margin), hi);
  if (fm.kind() == FitnessKind::Gpaf) return argmax_endpoint(fm.g(), dist);
  return std::nullopt;
}

// Expectation of h with a pole-aware hint (used by the GPAF phase tests).
double expected_h(const WeightDistribution& dist, const FitnessModel& fm,
                  const QuadratureSpec& quad) {
  WeightFunctional phi([&fm](double w) { return fm.h().eval(w); });
  const double lo = dist.support_inf();
  const double hi = dist.support_sup();
  if (std::isfinite(hi)) {
    const double margin = 0.5 * (hi - lo);
    if (fm.h().has_pole_in(lo, hi + margin))
      phi.singular_at = std::min(fm.h().pole_in(lo, hi + margin), hi);
  }
  return dist.expect(phi, quad);
}
}  // namespace

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::C1:
      return "C1";
    case Regime::Condensation:
      return "Condensation";
    case Regime::Boundary:
      return "Boundary";
    case Regime::Degenerate:
      return "Degenerate";
  }
  return "?";
}

namespace detail {

SeriesValue fitness_series(const FitnessModel& fm, double w, double lambda,
                           const SolveOptions& opts) {
  const AffineTail tail = fm.affine_tail(w);
  double prod = 1.0;
  double sum = 0.0;
  std::int64_t k = 0;
  for (; k < opts.series_max_terms; ++k) {
    const double fk = fm.eval(k, w);
    if (fk == 0.0) return {sum, k, 0.0};  // dead vertex: series terminates exactly
    prod *= fk / (fk + lambda);
    sum += prod;
    const bool tail_ready = (k + 1) >= tail.from_k;
    if (tail_ready) {
      // Exact remainder: f is affine (slope s) from here on, so the remaining
      // sum telescopes to prod * f(k+1, w) / (lambda - s).
      if (lambda <= tail.slope) return {kInf, k + 1, 0.0};  // certified divergence
      const double fnext = fm.eval(k + 1, w);
      const double rest = prod * fnext / (lambda - tail.slope);
      if ((k + 1) >= opts.series_partial_cap || prod < opts.series_term_tol ||
          rest < opts.series_term_tol * std::max(1.0, sum)) {
        return {sum + rest, k + 1, 4.0 * std::numeric_limits<double>::epsilon() *
                                       (sum + rest)};
      }
    }
    if (sum > 1e12) return {kInf, k + 1, 0.0};  // runaway partial sums
  }
  throw SeriesInconclusive("series reached max terms without a certified tail (w = " +
                           std::to_string(w) + ", lambda = " + std::to_string(lambda) +
                           ")");
}

}  // namespace detail

namespace {

// Generic-series evaluation of m(lambda); exact over atoms, quadrature over
// density pieces, +inf sentinel propagation.
MalthusEvaluation m_series(const WeightDistribution& dist, const FitnessModel& fm,
                           double lambda, const SolveOptions& opts) {
  MalthusEvaluation ev;
  ev.lambda = lambda;
  ev.method = MalthusMethod::Series;
  std::int64_t max_terms = 0;
  double max_tail = 0.0;
  WeightFunctional phi([&, lambda](double w) {
    auto sv = detail::fitness_series(fm, w, lambda, opts);
    max_terms = std::max(max_terms, sv.terms);
    max_tail = std::max(max_tail, sv.tail_bound);
    return sv.value;
  });
  phi.singular_at = series_singularity(fm, dist);
  const double val = dist.expect(phi, opts.quad);
  ev.value = fm.ell() * val;
  ev.terms_used = max_terms;
  ev.tail_bound = max_tail;
  return ev;
}

// GPAF closed form: m(lambda) = ell * E[h(W) / (lambda - g(W))], valid for
// lambda >= esssup(g) (the integrand may still fail to be integrable at the
// boundary, which the quadrature reports as +inf).
MalthusEvaluation m_gpaf_closed(const WeightDistribution& dist, const FitnessModel& fm,
                                double lambda, const SolveOptions& opts) {
  MalthusEvaluation ev;
  ev.lambda = lambda;
  ev.method = MalthusMethod::GpafClosedForm;
  const Expr& g = fm.g();
  const Expr& h = fm.h();
  WeightFunctional phi([&, lambda](double w) {
    const double denom = lambda - g.eval(w);
    if (denom <= 0.0) return kInf;
    return h.eval(w) / denom;
  });
  const double s = argmax_endpoint(g, dist);
  if (std::isfinite(s)) phi.singular_at = s;
  ev.value = fm.ell() * dist.expect(phi, opts.quad);
  return ev;
}

}  // namespace

MalthusEvaluation m_of_lambda(const WeightDistribution& dist, const FitnessModel& fm,
                              double lambda, const SolveOptions& opts,
                              MethodChoice method) {
  if (!(lambda > 0.0)) throw OutOfRange("m(lambda) requires lambda > 0");
  if (method == MethodChoice::ClosedForm ||
      (method == MethodChoice::Auto && fm.kind() == FitnessKind::Gpaf)) {
    if (fm.kind() != FitnessKind::Gpaf)
      throw NotGpaf("closed-form m(lambda) applies to GPAF models only");
    const double sg = esssup_on(fm.g(), dist);
    if (method == MethodChoice::ClosedForm || lambda >= sg) {
      if (lambda < sg) {
        MalthusEvaluation ev;
        ev.lambda = lambda;
        ev.method = MalthusMethod::GpafClosedForm;
        ev.value = kInf;
        return ev;
      }
      return m_gpaf_closed(dist, fm, lambda, opts);
    }
    // lambda below esssup(g): fall through to the series, which certifies +inf.
  }
  return m_series(dist, fm, lambda, opts);
}

namespace {

struct MEval {
  double lambda;
  double value;
};

// Monotone bisection for m(alpha) = 1 on (lo, hi) with m(lo) > 1 > m(hi).
double bisect_root(const std::function<double(double)>& m, double lo, double hi,
                   double tol) {
  for (int it = 0; it < 400 && (hi - lo) > tol * std::max(hi, 1e-300); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double v = m(mid);
    if (v > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

RegimeReport solve_gpaf(const WeightDistribution& dist, const FitnessModel& fm,
                        const SolveOptions& opts) {
  RegimeReport rep;
  const double sg = esssup_on(fm.g(), dist);
  if (std::isinf(sg) || std::isinf(expected_h(dist, fm, opts.quad))) {
    rep.regime = Regime::Degenerate;
    rep.lambda_tilde = kInf;
    rep.z_limit = kInf;
    return rep;
  }
  rep.lambda_tilde = sg;

  auto m_at = [&](double lambda) {
    return m_gpaf_closed(dist, fm, lambda, opts).value;
  };

  const double m_star = m_at(sg);
  if (std::isfinite(m_star)) rep.m_star = m_star;

  if (m_star > 1.0 + opts.tol) {
    // C1: unique root in (lambda_tilde, infinity).
    double lo = sg;
    double lo_val = m_star;
    if (!std::isfinite(m_star) || sg == 0.0) {
      // Walk a starting point with a finite value above 1.
      double delta = std::max(sg, 1.0) * 0.5;
      for (int it = 0; it < 200; ++it) {
        const double probe = sg + delta;
        const double v = m_at(probe);
        if (std::isfinite(v) && v > 1.0) {
          lo = probe;
          lo_val = v;
          break;
        }
        if (std::isfinite(v) && v <= 1.0) {
          delta *= 0.5;  // overshot the root; tighten toward lambda_tilde
          continue;
        }
        delta *= 0.5;
      }
      if (!std::isfinite(lo_val) || lo_val <= 1.0)
        throw InconclusiveRegime("failed to locate m(lambda) > 1 above lambda_tilde");
    }
    double hi = std::max(2.0 * std::max(lo, 1.0), lo * 2.0);
    const double cap = std::max(sg, 1.0) * 0x1p60;
    while (m_at(hi) >= 1.0) {
      hi *= 2.0;
      if (hi > cap) throw InconclusiveRegime("m(lambda) stayed above 1 up to the cap");
    }
    rep.regime = Regime::C1;
    rep.alpha = bisect_root(m_at, lo, hi, opts.tol);
    rep.z_limit = *rep.alpha;
    return rep;
  }

  rep.regime = std::abs(m_star - 1.0) <= opts.tol ? Regime::Boundary
                                                  : Regime::Condensation;
  // In this phase the partition function converges to g(w*).
  rep.z_limit = sg;
  return rep;
}

RegimeReport solve_generic(const WeightDistribution& dist, const FitnessModel& fm,
                           const SolveOptions& opts) {
  RegimeReport rep;
  auto m_at = [&](double lambda) { return m_series(dist, fm, lambda, opts).value; };

  // Geometric probe for the finiteness threshold.
  std::vector<MEval> finite;
  std::ostringstream trace;
  double largest_infinite = 0.0;
  for (int e = -40; e <= 62; e += 2) {
    const double lambda = std::ldexp(1.0, e);
    const double v = m_at(lambda);
    trace << " m(2^" << e << ")=" << v;
    if (std::isfinite(v))
      finite.push_back({lambda, v});
    else
      largest_infinite = std::max(largest_infinite, lambda);
    if (finite.size() >= 2 && v < 1.0) break;  // decreasing; nothing new below 1
  }
  if (finite.empty()) {
    rep.regime = Regime::Degenerate;
    rep.lambda_tilde = kInf;
    rep.z_limit = kInf;
    return rep;
  }

  // Refine lambda_tilde between the largest infinite and smallest finite probe.
  double lt = 0.0;
  if (largest_infinite > 0.0) {
    double bad = largest_infinite, good = finite.front().lambda;
    for (int it = 0; it < 200 && (good - bad) > opts.tol * good; ++it) {
      const double mid = 0.5 * (bad + good);
      if (std::isfinite(m_at(mid)))
        good = mid;
      else
        bad = mid;
    }
    lt = 0.5 * (bad + good);
  }
  rep.lambda_tilde = lt;

  // Largest finite value observed governs the phase; m is decreasing, so probe
  // just above lambda_tilde.
  double m_star = finite.front().value;
  for (const auto& fe : finite) m_star = std::max(m_star, fe.value);
  double near = lt > 0.0 ? lt * (1.0 + 1e-9) : std::ldexp(1.0, -42);
  const double near_val = m_at(near);
  if (std::isfinite(near_val)) m_star = std::max(m_star, near_val);

  if (m_star > 1.0 + opts.tol) {
    double lo = near, hi = 0.0;
    if (!(std::isfinite(near_val) && near_val > 1.0)) {
      for (const auto& fe : finite)
        if (fe.value > 1.0) lo = fe.lambda;
    }
    hi = std::max(2.0 * std::max(lo, 1.0), lo * 2.0);
    const double cap = std::max(lt, 1.0) * 0x1p60;
    while (m_at(hi) >= 1.0) {
      hi *= 2.0;
      if (hi > cap) throw InconclusiveRegime("m stayed above 1 up to the probe cap:" +
                                             trace.str());
    }
    rep.regime = Regime::C1;
    rep.alpha = bisect_root(m_at, lo, hi, opts.tol);
    rep.m_star = std::isinf(near_val) ? std::optional<double>{} : m_star;
    rep.z_limit = *rep.alpha;
    return rep;
  }

  rep.m_star = m_star;
  rep.regime =
      std::abs(m_star - 1.0) <= std::max(opts.tol, 1e-6) ? Regime::Boundary
                                                         : Regime::Condensation;
  // No partition-function limit is claimed outside GPAF here; z_limit stays unset.
  return rep;
}

}  // namespace

RegimeReport solve_malthusian(const WeightDistribution& dist, const FitnessModel& fm,
                              const SolveOptions& opts) {
  if (fm.kind() == FitnessKind::Gpaf) return solve_gpaf(dist, fm, opts);
  return solve_generic(dist, fm, opts);
}

double generalized_alpha(const WeightDistribution& dist, const FitnessModel& fm,
                         const SolveOptions& opts) {
  if (fm.kind() == FitnessKind::Gpaf) {
    const double sg = esssup_on(fm.g(), dist);
    if (std::isinf(sg) || std::isinf(expected_h(dist, fm, opts.quad))) return kInf;
    return sg;
  }
  RegimeReport rep = solve_generic(dist, fm, opts);
  return rep.lambda_tilde;
}

}  // namespace rif
