#include "rif/limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "rif/errors.hpp"
#include "rif/quadrature.hpp"

namespace rif {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

struct MassPoint {
  double w;
  double mass;
};

// Quadrature nodes and weights for integrating smooth columns of the degree
// table over one interval, with optional dyadic refinement toward a singular
// endpoint (needed in the condensation phase where products decay slowly
// near w*).
void append_nodes(std::vector<MassPoint>& out, const WeightDistribution::DensityPiece& p,
                  double lo, double hi, int n, std::optional<double> singular) {
  lo = std::max(lo, p.lo);
  hi = std::min(hi, p.hi);
  if (!(hi > lo)) return;

  auto plain = [&](double a, double b, int nn) {
    const auto& rule = gauss_legendre(nn);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (const auto& pt : rule) {
      const double w = mid + half * pt.x;
      out.push_back({w, pt.w * half * p.pdf(w)});
    }
  };

  if (singular && *singular == hi) {
    double far = hi - lo;
    plain(lo, hi - far * 0.5, n);
    for (int j = 1; j <= 44; ++j) {
      const double a = hi - far * std::ldexp(1.0, -j);
      const double b = hi - far * std::ldexp(1.0, -(j + 1));
      if (!(b > a)) break;
      plain(a, b, 16);
    }
  } else if (singular && *singular == lo) {
    double far = hi - lo;
    plain(lo + far * 0.5, hi, n);
    for (int j = 1; j <= 44; ++j) {
      const double a = lo + far * std::ldexp(1.0, -(j + 1));
      const double b = lo + far * std::ldexp(1.0, -j);
      if (!(b > a)) break;
      plain(a, b, 16);
    }
  } else {
    plain(lo, hi, n);
  }
}

// All mass points of `dist` grouped by bin cell (atoms use the partition
// convention: explicit atom cells claim their value first).
std::vector<std::vector<MassPoint>> cell_mass_points(const WeightDistribution& dist,
                                                     const BinSet& bins, int nodes,
                                                     std::optional<double> singular) {
  std::vector<std::vector<MassPoint>> per_cell(bins.cell_count());
  for (const auto& a : dist.atoms()) {
    const int j = bins.cell_index(a.value);
    if (j >= 0) per_cell[static_cast<std::size_t>(j)].push_back({a.value, a.prob});
  }
  for (std::size_t j = 0; j < bins.cell_count(); ++j) {
    const BinSet cell = bins.cell(j);
    for (const auto& iv : cell.intervals())
      for (const auto& p : dist.pieces())
        append_nodes(per_cell[j], p, iv.lo, iv.hi, nodes, singular);
  }
  return per_cell;
}

// Regime constant c for the degree/edge formulas; throws for regimes the
// closed forms do not cover.
double regime_constant(const FitnessModel& fm, const WeightDistribution& dist,
                       const RegimeReport& report) {
  switch (report.regime) {
    case Regime::C1:
      return *report.alpha;
    case Regime::Condensation:
    case Regime::Boundary: {
      if (fm.kind() != FitnessKind::Gpaf)
        throw NotGpaf("condensation-phase laws are stated for GPAF models only");
      const double sg = esssup_on(fm.g(), dist);
      const double at_top = fm.g().eval(dist.support_sup());
      if (!(at_top >= sg * (1.0 - 1e-12)))
        throw UnsupportedRegime(
            "condensation formulas require g to attain its esssup at w*");
      return sg;
    }
    case Regime::Degenerate:
      throw UnsupportedRegime("degree/edge laws are undefined in the degenerate "
                              "regime; use degenerate_law");
  }
  throw UnsupportedRegime("unclassified regime");
}

}  // namespace

double DegreeLawTable::row_sum(std::int64_t k) const {
  double s = 0.0;
  for (double v : p[static_cast<std::size_t>(k)]) s += v;
  return s;
}

double DegreeLawTable::total_mass() const {
  double s = 0.0;
  for (const auto& row : p)
    for (double v : row) s += v;
  return s;
}

double EdgeLawMeasure::total() const {
  double s = atom_at_wstar;
  for (double v : continuous) s += v;
  return s;
}

DegreeLawTable degree_law(const WeightDistribution& dist, const FitnessModel& fm,
                          const RegimeReport& report, const BinSet& bins,
                          std::int64_t k_max, const SolveOptions& opts) {
  const double c = regime_constant(fm, dist, report);
  const double ell = fm.ell();

  DegreeLawTable table;
  table.bins = bins;
  table.k_max = k_max;
  table.regime_constant = c;
  table.p.assign(static_cast<std::size_t>(k_max) + 1,
                 std::vector<double>(bins.cell_count(), 0.0));
  table.tail_mass.assign(bins.cell_count(), 0.0);
  table.edge_tail.assign(bins.cell_count(), 0.0);

  std::optional<double> singular;
  if (report.regime != Regime::C1 && std::isfinite(dist.support_sup()))
    singular = dist.support_sup();

  const auto per_cell = cell_mass_points(dist, bins, opts.quad.nodes, singular);
  for (std::size_t j = 0; j < per_cell.size(); ++j) {
    for (const auto& mp : per_cell[j]) {
      double prod = 1.0;  // prod_{i<k} f(i,w)/(f(i,w)+c)
      for (std::int64_t k = 0; k <= k_max; ++k) {
        const double fk = fm.eval(k, mp.w);
        table.p[static_cast<std::size_t>(k)][j] += mp.mass * prod * c / (fk + c);
        prod *= fk / (fk + c);
        if (prod == 0.0) break;
      }
      if (prod > 0.0) {
        table.tail_mass[j] += mp.mass * prod;
        // Exact affine remainder of sum_{k>k_max} t_k plus the k_max*t_{K+1}
        // telescoping correction (t_k = prod_{i<k} of the ratios).
        const AffineTail at = fm.affine_tail(mp.w);
        const double fnext = fm.eval(k_max + 1, mp.w);
        if (c > at.slope) {
          const double series_rest = prod * (1.0 + fnext / (c - at.slope));
          table.edge_tail[j] +=
              mp.mass * ell * (static_cast<double>(k_max) * prod + series_rest);
        } else {
          table.edge_tail[j] = kInf;
        }
      }
    }
  }
  return table;
}

EdgeLawMeasure edge_law(const WeightDistribution& dist, const FitnessModel& fm,
                        const RegimeReport& report, const BinSet& bins,
                        const SolveOptions& opts) {
  EdgeLawMeasure law;
  law.bins = bins;
  law.regime = report.regime;
  law.continuous.assign(bins.cell_count(), 0.0);
  law.atom_at_wstar = 0.0;

  if (report.regime == Regime::Degenerate) {
    law.atom_at_wstar = 1.0;
    return law;
  }
  const double c = regime_constant(fm, dist, report);
  const double ell = fm.ell();
  const double wstar = dist.support_sup();

  // Continuous part: ell * E[S(c, W) 1_B]; for GPAF S has the closed form
  // h/(c - g), integrable at w* in the condensation phase.
  for (std::size_t j = 0; j < bins.cell_count(); ++j) {
    WeightFunctional phi;
    if (fm.kind() == FitnessKind::Gpaf) {
      const Expr g = fm.g();
      const Expr h = fm.h();
      phi.fn = [g, h, c](double w) {
        const double denom = c - g.eval(w);
        if (denom <= 0.0) return kInf;
        return h.eval(w) / denom;
      };
      if (std::isfinite(wstar)) phi.singular_at = wstar;
    } else {
      const FitnessModel fmc = fm;
      const SolveOptions o = opts;
      phi.fn = [fmc, c, o](double w) {
        return detail::fitness_series(fmc, w, c, o).value;
      };
    }
    law.continuous[j] = ell * dist.expect(restrict_indicator(bins.cell(j), phi),
                                          opts.quad);
  }

  if (report.regime == Regime::Condensation || report.regime == Regime::Boundary) {
    WeightFunctional phi;
    const Expr g = fm.g();
    const Expr h = fm.h();
    phi.fn = [g, h, c](double w) {
      const double denom = c - g.eval(w);
      if (denom <= 0.0) return kInf;
      return h.eval(w) / denom;
    };
    if (std::isfinite(wstar)) phi.singular_at = wstar;
    const double m_star = ell * dist.expect(phi, opts.quad);
    law.atom_at_wstar = std::max(0.0, 1.0 - m_star);
  }
  return law;
}

std::vector<double> degenerate_law(const WeightDistribution& dist, const BinSet& bins) {
  std::vector<double> out(bins.cell_count(), 0.0);
  for (const auto& a : dist.atoms()) {
    const int j = bins.cell_index(a.value);
    if (j < 0)
      throw BinGap("atom at " + std::to_string(a.value) + " not covered by bins");
    out[static_cast<std::size_t>(j)] += a.prob;
  }
  for (std::size_t j = 0; j < bins.cell_count(); ++j) {
    const BinSet cell = bins.cell(j);
    for (const auto& iv : cell.intervals())
      for (const auto& p : dist.pieces()) out[j] += p.mass(iv.lo, iv.hi);
  }
  return out;
}

std::vector<double> fermi_dirac_law(const WeightDistribution& energies, double beta,
                                    double alpha, const BinSet& bins,
                                    const SolveOptions& opts) {
  std::vector<double> out(bins.cell_count(), 0.0);
  for (std::size_t j = 0; j < bins.cell_count(); ++j) {
    WeightFunctional phi([beta, alpha](double e) {
      return alpha / (alpha + std::exp(beta * e));
    });
    out[j] = energies.expect(restrict_indicator(bins.cell(j), phi), opts.quad);
  }
  return out;
}

std::vector<double> fermi_dirac_law(const WeightDistribution& energies,
                                    const FitnessModel& fm, double alpha,
                                    const BinSet& bins, const SolveOptions& opts) {
  if (fm.kind() != FitnessKind::Cayley)
    throw RequiresCayley("the Fermi-Dirac law applies to Cayley models");
  double beta = 0.0;
  if (fm.g().kind() == Expr::Kind::Exp)
    beta = fm.g().p0();
  else if (fm.g().kind() == Expr::Kind::Const)
    beta = 0.0;
  else
    throw RequiresCayley("Fermi-Dirac law needs g = exp(beta*energy) or a constant");
  return fermi_dirac_law(energies, beta, alpha, bins, opts);
}

double power_law_exponent(const FitnessModel& fm, const RegimeReport& report,
                          double w) {
  if (fm.kind() != FitnessKind::Gpaf)
    throw NotGpaf("the Stirling exponent is a GPAF statement");
  double c = 0.0;
  switch (report.regime) {
    case Regime::C1:
      c = *report.alpha;
      break;
    case Regime::Condensation:
    case Regime::Boundary:
      c = report.lambda_tilde;  // g(w*) for GPAF
      break;
    case Regime::Degenerate:
      throw UnsupportedRegime("no power law in the degenerate regime");
  }
  const double gw = fm.g().eval(w);
  if (!(gw > 0.0)) throw OutOfRange("power-law exponent needs g(w) > 0");
  return 1.0 + c / gw;
}

}  // namespace rif
