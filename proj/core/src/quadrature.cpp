#include "rif/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "rif/errors.hpp"

namespace rif {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<GLPoint> compute_gauss_legendre(int n) {
  // Newton iteration on P_n with the usual asymptotic initial guess.
  std::vector<GLPoint> pts(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    pts[i] = {-x, w};
    pts[n - 1 - i] = {x, w};
  }
  return pts;
}
}  // namespace

const std::vector<GLPoint>& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, std::vector<GLPoint>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

double Integrator::smooth_segment(const std::function<double(double)>& f, double a,
                                  double b, int n, bool& overflow) const {
  const auto& rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (const auto& pt : rule) {
    const double v = f(mid + half * pt.x);
    if (std::abs(v) > spec_.overflow_guard) overflow = true;
    sum += pt.w * v;
  }
  return sum * half;
}

double Integrator::singular_segment(const std::function<double(double)>& f, double a,
                                    double b, bool singular_at_b, bool& diverged,
                                    bool& overflow) const {
  // Dyadic composite toward the singular endpoint. Level contributions of a
  // power singularity (x^-beta) form a geometric sequence with ratio
  // 2^(beta-1): decaying iff the singularity is integrable, which doubles as
  // the divergence certificate.
  const double len = b - a;
  double total = 0.0;
  double prev = kInf;
  double ratio = 0.0;
  int stall = 0;
  int negligible = 0;
  double level_contrib = 0.0;
  for (int j = 0; j < spec_.max_singular_levels; ++j) {
    const double far = len * std::ldexp(1.0, -j);
    const double near = len * std::ldexp(1.0, -(j + 1));
    double lo, hi;
    if (singular_at_b) {
      lo = b - far;
      hi = b - near;
    } else {
      lo = a + near;
      hi = a + far;
    }
    if (lo >= hi) break;  // fell below representable resolution
    level_contrib = smooth_segment(f, lo, hi, 32, overflow);
    total += level_contrib;
    const double scale = std::max(std::abs(total), 1e-300);
    negligible = std::abs(level_contrib) < 1e-16 * scale ? negligible + 1 : 0;
    if (negligible >= 2) return total;  // tail negligible
    if (std::isfinite(prev) && std::abs(prev) > 0.0) {
      ratio = std::abs(level_contrib) / std::abs(prev);
      stall = (ratio >= 0.999) ? stall + 1 : 0;
      if (stall >= 4) {  // contributions not decaying: non-integrable
        diverged = true;
        return kInf;
      }
    }
    prev = level_contrib;
  }
  // Ran out of levels; extrapolate the remaining geometric tail.
  if (ratio > 0.0 && ratio < 0.999)
    total += level_contrib * ratio / (1.0 - ratio);
  return total;
}

double Integrator::integrate(const std::function<double(double)>& f, double a, double b,
                             std::span<const double> breakpoints,
                             std::optional<double> singular_endpoint) const {
  if (!(b > a)) return 0.0;

  std::vector<double> cuts;
  cuts.push_back(a);
  for (double c : breakpoints)
    if (c > a && c < b) cuts.push_back(c);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [&](double x, double y) { return y - x < 1e-14 * (b - a); }),
             cuts.end());

  bool overflow = false;
  bool diverged = false;
  double singular_part = 0.0;
  std::size_t first = 0;
  std::size_t last = cuts.size() - 1;

  if (singular_endpoint) {
    if (*singular_endpoint == b && cuts.size() >= 2) {
      singular_part =
          singular_segment(f, cuts[last - 1], cuts[last], true, diverged, overflow);
      --last;
    } else if (*singular_endpoint == a && cuts.size() >= 2) {
      singular_part = singular_segment(f, cuts[0], cuts[1], false, diverged, overflow);
      ++first;
    }
  }
  if (diverged || overflow) return kInf;

  double coarse = 0.0, fine = 0.0;
  for (std::size_t i = first; i < last; ++i) {
    coarse += smooth_segment(f, cuts[i], cuts[i + 1], spec_.nodes, overflow);
    fine += smooth_segment(f, cuts[i], cuts[i + 1], 2 * spec_.nodes, overflow);
  }
  if (overflow) return kInf;

  const double scale = std::max({std::abs(fine), std::abs(singular_part), 1e-300});
  if (std::abs(fine - coarse) > spec_.rel_tol * scale) {
    // A growing refinement of a nonnegative integrand is treated as divergence.
    if (fine > coarse && coarse >= 0.0 && fine > 1e6 * spec_.rel_tol * scale &&
        fine > 1e8) {
      return kInf;
    }
    throw NonConvergentQuadrature("quadrature refinement disagreement: " +
                                  std::to_string(coarse) + " vs " +
                                  std::to_string(fine));
  }
  return fine + singular_part;
}

}  // namespace rif
