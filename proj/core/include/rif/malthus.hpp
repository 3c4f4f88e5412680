#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "rif/fitness.hpp"
#include "rif/quadrature.hpp"
#include "rif/weights.hpp"

namespace rif {

enum class Regime { C1, Condensation, Boundary, Degenerate };

const char* regime_name(Regime r);

enum class MalthusMethod { Series, GpafClosedForm };

struct MalthusEvaluation {
  double lambda = 0.0;
  double value = 0.0;  // m(lambda); +infinity for certified divergence
  std::int64_t terms_used = 0;
  double tail_bound = 0.0;
  MalthusMethod method = MalthusMethod::Series;
};

struct SolveOptions {
  double tol = 1e-10;            // bisection relative width; boundary tolerance
  double series_term_tol = 1e-12;
  std::int64_t series_max_terms = 100000;
  std::int64_t series_partial_cap = 2048;  // direct terms before the exact tail
  QuadratureSpec quad;
};

struct RegimeReport {
  Regime regime = Regime::C1;
  std::optional<double> alpha;     // root of m(alpha) = 1, present iff C1
  double lambda_tilde = 0.0;       // inf{lambda : m(lambda) < inf}; +inf degenerate
  std::optional<double> m_star;    // m(lambda_tilde+), present when finite
  std::optional<double> z_limit;   // predicted Z_t/t limit (+inf degenerate)
};

enum class MethodChoice { Auto, Series, ClosedForm };

// m(lambda) = ell * E[ sum_n prod_{i<n} f(i,W)/(f(i,W)+lambda) ].
// The series route sums terms directly and closes with an exact affine-tail
// correction; the GPAF route integrates ell*E[h/(lambda-g)] (valid for
// lambda >= esssup g). Divergence comes back as value = +infinity.
MalthusEvaluation m_of_lambda(const WeightDistribution& dist, const FitnessModel& fm,
                              double lambda, const SolveOptions& opts = {},
                              MethodChoice method = MethodChoice::Auto);

RegimeReport solve_malthusian(const WeightDistribution& dist, const FitnessModel& fm,
                              const SolveOptions& opts = {});

inline RegimeReport solve_malthusian(const WeightDistribution& dist,
                                     const FitnessModel& fm, double tol) {
  SolveOptions opts;
  opts.tol = tol;
  return solve_malthusian(dist, fm, opts);
}

// inf{lambda > 0 : m(lambda) < inf}. Diagnostic only: outside the affine
// family no limit law is attached to this quantity.
double generalized_alpha(const WeightDistribution& dist, const FitnessModel& fm,
                         const SolveOptions& opts = {});

namespace detail {
// Inner series at a single weight: sum_{n>=1} prod_{i<n} f(i,w)/(f(i,w)+lambda).
struct SeriesValue {
  double value;
  std::int64_t terms;
  double tail_bound;
};
SeriesValue fitness_series(const FitnessModel& fm, double w, double lambda,
                           const SolveOptions& opts);
}  // namespace detail

}  // namespace rif
