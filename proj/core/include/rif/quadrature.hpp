#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace rif {

struct QuadratureSpec {
  int nodes = 256;               // Gauss-Legendre nodes per smooth segment
  double rel_tol = 1e-9;         // agreement required between n and 2n refinement
  double overflow_guard = 1e100; // integrand beyond this means divergence
  int max_singular_levels = 48;  // dyadic levels toward a singular endpoint
};

struct GLPoint {
  double x;  // abscissa in (-1, 1)
  double w;  // weight
};

// Nodes/weights for the n-point Gauss-Legendre rule, cached per n.
const std::vector<GLPoint>& gauss_legendre(int n);

// Integrates f over [a, b], splitting at interior breakpoints, with an
// optional integrable-singularity hint at one endpoint. Returns +infinity as
// a sentinel for certified divergence of a nonnegative integrand; throws
// NonConvergentQuadrature when refinement disagrees without divergence.
class Integrator {
 public:
  explicit Integrator(QuadratureSpec spec = {}) : spec_(spec) {}

  double integrate(const std::function<double(double)>& f, double a, double b,
                   std::span<const double> breakpoints = {},
                   std::optional<double> singular_endpoint = {}) const;

  const QuadratureSpec& spec() const { return spec_; }

 private:
  double smooth_segment(const std::function<double(double)>& f, double a, double b,
                        int n, bool& overflow) const;
  double singular_segment(const std::function<double(double)>& f, double a, double b,
                          bool singular_at_b, bool& diverged, bool& overflow) const;

  QuadratureSpec spec_;
};

}  // namespace rif
