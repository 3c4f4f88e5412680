#pragma once

// Independent oracles for the test suites. Everything here recomputes
// expected values by brute force or from a closed form derived separately
// from the library path it checks.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

namespace oracle {

// Direct long-double summation of sum_{n>=1} prod_{i<n} f(i)/(f(i)+lambda),
// no tail certificates. n_terms must be large enough for the use site.
inline double series_brute_force(const std::function<double(std::int64_t)>& f,
                                 double lambda, std::int64_t n_terms) {
  long double prod = 1.0L;
  long double sum = 0.0L;
  for (std::int64_t i = 0; i < n_terms; ++i) {
    const long double fi = f(i);
    if (fi == 0.0L) break;
    prod *= fi / (fi + static_cast<long double>(lambda));
    sum += prod;
  }
  return static_cast<double>(sum);
}

// Linear-scan prefix oracle: smallest i with prefix_sum(i) > u * total.
inline std::size_t linear_scan_sample(const std::vector<double>& weights, double u) {
  double total = 0.0;
  for (double w : weights) total += w;
  const double target = u * total;
  double prefix = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    prefix += weights[i];
    if (prefix > target) return i;
  }
  return weights.size() - 1;
}

// PORT limit law, alpha = 2: p_k = 4 / ((k+1)(k+2)(k+3)).
inline double port_pk(std::int64_t k) {
  const double kd = static_cast<double>(k);
  return 4.0 / ((kd + 1.0) * (kd + 2.0) * (kd + 3.0));
}

// WRRT with unit point-mass weights, ell = 1: p_k = 2^-(k+1).
inline double wrrt_pk(std::int64_t k) { return std::ldexp(1.0, -(static_cast<int>(k) + 1)); }

// Bianconi-Barabasi uniform multiplicative: m(lambda) = -1 + lambda*ln(lambda/(lambda-1)).
inline double bb_m(double lambda) {
  return -1.0 + lambda * std::log(lambda / (lambda - 1.0));
}

inline double bb_alpha_reference() {
  double lo = 1.0 + 1e-9, hi = 16.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (bb_m(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Exact root out-degree distribution of a discrete-time run at small t with
// ell = 1, by enumerating every attachment sequence. f maps the per-vertex
// event count k to a fitness (weights constant across vertices).
inline std::map<std::int64_t, double> enumerate_root_degree(
    const std::function<double(std::int64_t)>& f, std::int64_t t_final) {
  std::map<std::int64_t, double> dist;
  // State: out-degree (event count) per vertex; recursion over time steps.
  std::function<void(std::vector<std::int64_t>&, double, std::int64_t)> walk =
      [&](std::vector<std::int64_t>& deg, double prob, std::int64_t t) {
        if (t == t_final) {
          dist[deg[0]] += prob;
          return;
        }
        double z = 0.0;
        for (std::int64_t d : deg) z += f(d);
        for (std::size_t j = 0; j < deg.size(); ++j) {
          const double fj = f(deg[j]);
          if (fj == 0.0) continue;
          std::vector<std::int64_t> next = deg;
          next[j] += 1;
          next.push_back(0);
          walk(next, prob * fj / z, t + 1);
        }
      };
  std::vector<std::int64_t> root{0};
  walk(root, 1.0, 0);
  return dist;
}

// Composite Simpson integration, used as a quadrature-independent reference.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int n_half) {
  const int n = 2 * n_half;
  const double h = (b - a) / n;
  double sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) sum += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

}  // namespace oracle
