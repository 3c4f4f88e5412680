#include "rif/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rif/errors.hpp"

namespace rif {

double EmpiricalSummary::vertex_total() const {
  double s = 0.0;
  for (const auto& row : counts)
    for (double v : row) s += v;
  for (double v : overflow_count) s += v;
  return s;
}

double EmpiricalSummary::edge_total() const {
  double s = 0.0;
  for (double v : edge_mass) s += v;
  return s;
}

EmpiricalSummary summarize(const TreeState& tree, const BinSet& bins,
                           std::int64_t k_max) {
  EmpiricalSummary s;
  s.bins = bins;
  s.k_max = k_max;
  s.ell = tree.ell;
  s.t = tree.t;
  s.replicas = 1;
  s.counts.assign(static_cast<std::size_t>(k_max) + 1,
                  std::vector<double>(bins.cell_count(), 0.0));
  s.overflow_count.assign(bins.cell_count(), 0.0);
  s.overflow_edges.assign(bins.cell_count(), 0.0);
  s.edge_mass.assign(bins.cell_count(), 0.0);

  for (std::size_t v = 0; v < tree.vertex_count(); ++v) {
    const double w = tree.weights[v];
    const int j = bins.cell_index(w);
    if (j < 0)
      throw BinGap("weight " + std::to_string(w) + " is not covered by the bins");
    const auto jj = static_cast<std::size_t>(j);
    const std::int64_t k = tree.out_degree[v] / tree.ell;
    if (k <= k_max)
      s.counts[static_cast<std::size_t>(k)][jj] += 1.0;
    else {
      s.overflow_count[jj] += 1.0;
      s.overflow_edges[jj] += static_cast<double>(tree.out_degree[v]);
    }
    s.edge_mass[jj] += static_cast<double>(tree.out_degree[v]);
  }
  return s;
}

EmpiricalSummary summarize(const TreeState& tree, const GrowthTrajectory& traj,
                           const BinSet& bins, std::int64_t k_max,
                           const std::vector<double>& window_lows) {
  EmpiricalSummary s = summarize(tree, bins, k_max);
  s.checkpoints = traj.checkpoints;
  s.window_lows = window_lows;
  return s;
}

EmpiricalSummary merge(const EmpiricalSummary& a, const EmpiricalSummary& b) {
  if (a.k_max != b.k_max || a.ell != b.ell || a.t != b.t ||
      a.bins.cell_count() != b.bins.cell_count() ||
      a.counts.size() != b.counts.size() ||
      a.checkpoints.size() != b.checkpoints.size())
    throw ShapeMismatch("summaries have different shapes");

  EmpiricalSummary out = a;
  for (std::size_t k = 0; k < out.counts.size(); ++k)
    for (std::size_t j = 0; j < out.counts[k].size(); ++j)
      out.counts[k][j] += b.counts[k][j];
  for (std::size_t j = 0; j < out.overflow_count.size(); ++j) {
    out.overflow_count[j] += b.overflow_count[j];
    out.overflow_edges[j] += b.overflow_edges[j];
    out.edge_mass[j] += b.edge_mass[j];
  }
  const double wa = static_cast<double>(a.replicas);
  const double wb = static_cast<double>(b.replicas);
  for (std::size_t c = 0; c < out.checkpoints.size(); ++c) {
    const Checkpoint& ca = a.checkpoints[c];
    const Checkpoint& cb = b.checkpoints[c];
    if (ca.t != cb.t || ca.window_mass.size() != cb.window_mass.size())
      throw ShapeMismatch("trajectories have different checkpoint grids");
    Checkpoint& co = out.checkpoints[c];
    co.z_over_t = (wa * ca.z_over_t + wb * cb.z_over_t) / (wa + wb);
    co.leaf_count = (wa * ca.leaf_count + wb * cb.leaf_count) / (wa + wb);
    for (std::size_t i = 0; i < co.window_mass.size(); ++i)
      co.window_mass[i] =
          (wa * ca.window_mass[i] + wb * cb.window_mass[i]) / (wa + wb);
  }
  out.replicas = a.replicas + b.replicas;
  return out;
}

DegreeComparison compare_degree(const EmpiricalSummary& emp, const DegreeLawTable& law,
                                std::int64_t cutoff) {
  if (emp.k_max != law.k_max || emp.bins.cell_count() != law.bins.cell_count())
    throw ShapeMismatch("summary and law table have different shapes");
  if (cutoff < 0) cutoff = emp.k_max;
  cutoff = std::min(cutoff, emp.k_max);

  const double denom = static_cast<double>(emp.replicas) *
                       static_cast<double>(emp.ell) * static_cast<double>(emp.t);
  if (!(denom > 0.0)) throw InsufficientData("empty summary");

  DegreeComparison cmp;
  cmp.cutoff = cutoff;
  double abs_sum = 0.0;
  for (std::int64_t k = 0; k <= cutoff; ++k) {
    for (std::size_t j = 0; j < emp.bins.cell_count(); ++j) {
      const double phat = emp.counts[static_cast<std::size_t>(k)][j] / denom;
      const double p = law.p[static_cast<std::size_t>(k)][j];
      const double diff = phat - p;
      cmp.max_abs = std::max(cmp.max_abs, std::abs(diff));
      abs_sum += std::abs(diff);
      double resid = 0.0;
      if (p > 0.0 && p < 1.0) {
        resid = diff / std::sqrt(p * (1.0 - p) / denom);
        cmp.max_std_residual = std::max(cmp.max_std_residual, std::abs(resid));
      }
      cmp.cells.push_back({k, j, phat, p, resid});
    }
  }
  // Tail row: everything beyond the cutoff on both sides, as one cell.
  double emp_tail = 0.0, law_tail = 0.0;
  for (std::size_t j = 0; j < emp.bins.cell_count(); ++j) {
    emp_tail += emp.overflow_count[j];
    law_tail += law.tail_mass[j];
  }
  for (std::int64_t k = cutoff + 1; k <= emp.k_max; ++k)
    for (std::size_t j = 0; j < emp.bins.cell_count(); ++j) {
      emp_tail += emp.counts[static_cast<std::size_t>(k)][j];
      law_tail += law.p[static_cast<std::size_t>(k)][j];
    }
  abs_sum += std::abs(emp_tail / denom - law_tail);
  cmp.tv = 0.5 * abs_sum;
  return cmp;
}

std::vector<std::pair<double, double>> condensation_profile(
    const EmpiricalSummary& emp, double wstar, const std::vector<double>& epsilons) {
  if (emp.checkpoints.empty() || emp.window_lows.empty())
    throw InsufficientData("summary carries no profile windows");
  const Checkpoint& last = emp.checkpoints.back();
  std::vector<std::pair<double, double>> out;
  for (double eps : epsilons) {
    const double lo = wstar - eps;
    // Find the tracked window whose lower edge matches.
    std::size_t best = emp.window_lows.size();
    for (std::size_t i = 0; i < emp.window_lows.size(); ++i)
      if (std::abs(emp.window_lows[i] - lo) < 1e-12) best = i;
    if (best == emp.window_lows.size())
      throw InsufficientData("no tracked window at w* - eps for eps = " +
                             std::to_string(eps));
    out.emplace_back(eps, last.window_mass[best]);
  }
  return out;
}

PartitionDiagnostic partition_diagnostic(const std::vector<Checkpoint>& checkpoints,
                                         double predicted) {
  if (checkpoints.empty()) throw InsufficientData("empty trajectory");
  PartitionDiagnostic d;
  d.final_value = checkpoints.back().z_over_t;
  d.predicted_infinite = std::isinf(predicted);

  const std::size_t n = checkpoints.size();
  const std::size_t from = n > 10 ? n - 10 : 0;
  std::vector<double> ts, ys;
  for (std::size_t i = from; i < n; ++i) {
    ts.push_back(static_cast<double>(checkpoints[i].t));
    ys.push_back(checkpoints[i].z_over_t);
  }

  if (d.predicted_infinite) {
    // Growth exponent of Z_t/t: least-squares slope in log-log scale.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (!(ts[i] > 0.0 && ys[i] > 0.0)) continue;
      const double x = std::log(ts[i]); const double y = std::log(ys[i]);
      sx += x; sy += y; sxx += x * x; sxy += x * y;
      ++m;
    }
    if (m >= 2)
      d.growth_exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return d;
  }

  d.rel_err = std::abs(d.final_value - predicted) /
              std::max(std::abs(predicted), 1e-300);
  std::vector<double> errs;
  for (double y : ys) errs.push_back(std::abs(y - predicted));
  if (errs.size() >= 3) d.trend = spearman(ts, errs);
  return d;
}

PartitionDiagnostic partition_diagnostic(const EmpiricalSummary& emp,
                                         double predicted) {
  return partition_diagnostic(emp.checkpoints, predicted);
}

std::vector<double> leaf_fraction(const EmpiricalSummary& emp) {
  if (emp.t <= 0) throw InsufficientData("leaf fraction is undefined at t = 0");
  std::vector<double> out(emp.bins.cell_count(), 0.0);
  const double denom =
      static_cast<double>(emp.replicas) * static_cast<double>(emp.t);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = emp.counts[0][j] / denom;
  return out;
}

TailFit tail_exponent(const EmpiricalSummary& emp, std::size_t cell, std::int64_t k_lo,
                      std::int64_t k_hi) {
  if (cell >= emp.bins.cell_count()) throw OutOfRange("cell index out of range");
  k_hi = std::min(k_hi, emp.k_max);
  std::vector<double> xs, ys;
  for (std::int64_t k = std::max<std::int64_t>(k_lo, 1); k <= k_hi; ++k) {
    const double c = emp.counts[static_cast<std::size_t>(k)][cell];
    if (c > 0.0) {
      xs.push_back(std::log(static_cast<double>(k)));
      ys.push_back(std::log(c));
    }
  }
  if (xs.size() < 5)
    throw InsufficientData("fewer than 5 populated degree cells in the fit range");

  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i]; sy += ys[i]; sxx += xs[i] * xs[i]; sxy += xs[i] * ys[i];
  }
  TailFit fit;
  const double denom = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - fit.slope * sx) / n;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + fit.slope * xs[i]);
    rss += r * r;
  }
  if (xs.size() > 2)
    fit.std_error = std::sqrt(rss / (n - 2.0) / (sxx - sx * sx / n));
  fit.cells_used = static_cast<std::int64_t>(xs.size());
  return fit;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw InsufficientData("spearman needs two equal series of length >= 2");
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size(); ++i) r[idx[i]] = static_cast<double>(i);
    return r;
  };
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double num = 0, dx = 0, dy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    num += (rx[i] - mx) * (ry[i] - my);
    dx += (rx[i] - mx) * (rx[i] - mx);
    dy += (ry[i] - my) * (ry[i] - my);
  }
  if (dx == 0.0 || dy == 0.0) return 0.0;
  return num / std::sqrt(dx * dy);
}

namespace {

// Regularized upper incomplete gamma Q(a, x) via series / continued fraction.
double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw OutOfRange("gamma_q domain");
  if (x == 0.0) return 1.0;
  const double lg = std::lgamma(a);
  if (x < a + 1.0) {
    // P(a, x) by series, Q = 1 - P.
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < 10000; ++i) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    const double p = sum * std::exp(-x + a * std::log(x) - lg);
    return std::max(0.0, 1.0 - p);
  }
  // Lentz continued fraction for Q.
  double b = x + 1.0 - a;
  double c = 1e300;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 10000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - lg) * h;
}

}  // namespace

double chi_square_pvalue(double statistic, double df) {
  if (statistic <= 0.0) return 1.0;
  return gamma_q(0.5 * df, 0.5 * statistic);
}

double chi_square_gof_pvalue(const std::vector<double>& observed,
                             const std::vector<double>& expected_probs) {
  if (observed.size() != expected_probs.size())
    throw ShapeMismatch("observed and expected sizes differ");
  double n = 0.0;
  for (double o : observed) n += o;
  double stat = 0.0;
  int df = -1;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = n * expected_probs[i];
    if (e <= 0.0) {
      if (observed[i] > 0.0) return 0.0;  // impossible cell observed
      continue;
    }
    stat += (observed[i] - e) * (observed[i] - e) / e;
    ++df;
  }
  if (df <= 0) return 1.0;
  return chi_square_pvalue(stat, static_cast<double>(df));
}

double chi_square_two_sample_pvalue(const std::vector<double>& a,
                                    const std::vector<double>& b) {
  if (a.size() != b.size()) throw ShapeMismatch("histogram sizes differ");
  double na = 0.0, nb = 0.0;
  for (double v : a) na += v;
  for (double v : b) nb += v;
  if (!(na > 0.0 && nb > 0.0)) throw InsufficientData("empty histogram");
  const double ka = std::sqrt(nb / na);
  const double kb = std::sqrt(na / nb);
  double stat = 0.0;
  int df = -1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double tot = a[i] + b[i];
    if (tot <= 0.0) continue;
    const double d = ka * a[i] - kb * b[i];
    stat += d * d / tot;
    ++df;
  }
  if (df <= 0) return 1.0;
  return chi_square_pvalue(stat, static_cast<double>(df));
}

}  // namespace rif
