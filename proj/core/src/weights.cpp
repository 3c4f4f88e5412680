#include "rif/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "detail_json.hpp"
#include "rif/errors.hpp"

namespace rif {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double poly_eval(const std::vector<double>& c, double w) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * w + *it;
  return v;
}

// Antiderivative of the polynomial, zero constant term.
std::vector<double> poly_antiderivative(const std::vector<double>& c) {
  std::vector<double> F(c.size() + 1, 0.0);
  for (std::size_t i = 0; i < c.size(); ++i) F[i + 1] = c[i] / static_cast<double>(i + 1);
  return F;
}
}  // namespace

double WeightDistribution::DensityPiece::pdf(double w) const {
  if (w < lo || w > hi) return 0.0;
  if (!poly.empty()) return poly_eval(poly, w);
  return exp_rate * std::exp(-exp_rate * w);
}

double WeightDistribution::DensityPiece::mass(double lo_cut, double hi_cut) const {
  const double a = std::max(lo, lo_cut);
  const double b = std::min(hi, hi_cut);
  if (!(b > a)) return 0.0;
  if (!poly.empty()) {
    const auto F = poly_antiderivative(poly);
    return poly_eval(F, b) - poly_eval(F, a);
  }
  return std::exp(-exp_rate * a) - std::exp(-exp_rate * b);
}

WeightFunctional restrict_indicator(const BinSet& B, WeightFunctional phi) {
  WeightFunctional out;
  auto inner = phi.fn;
  out.fn = [B, inner](double w) { return B.contains(w) ? inner(w) : 0.0; };
  out.breakpoints = std::move(phi.breakpoints);
  for (double e : B.edges())
    if (std::isfinite(e)) out.breakpoints.push_back(e);
  out.singular_at = phi.singular_at;
  return out;
}

WeightDistribution WeightDistribution::point_mass(double c) {
  if (c < 0.0) throw BadConfig("point mass must be a nonnegative weight");
  WeightDistribution d;
  d.kind_ = WeightKind::PointMass;
  d.atoms_ = {{c, 1.0}};
  d.finalize();
  return d;
}

WeightDistribution WeightDistribution::finite_atoms(std::vector<Atom> atoms) {
  if (atoms.empty()) throw BadConfig("finite_atoms needs at least one atom");
  double total = 0.0;
  for (const auto& a : atoms) {
    if (a.value < 0.0) throw BadConfig("atom values must be nonnegative");
    if (!(a.prob > 0.0 && a.prob <= 1.0))
      throw BadConfig("atom probabilities must lie in (0, 1]");
    total += a.prob;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw BadConfig("atom probabilities must sum to 1 (got " + std::to_string(total) + ")");
  WeightDistribution d;
  d.kind_ = WeightKind::FiniteAtoms;
  d.atoms_ = std::move(atoms);
  d.finalize();
  return d;
}

WeightDistribution WeightDistribution::uniform(double a, double b) {
  if (!(0.0 <= a && a < b)) throw BadConfig("uniform needs 0 <= a < b");
  WeightDistribution d;
  d.kind_ = WeightKind::Uniform;
  d.pieces_.push_back({a, b, {1.0 / (b - a)}, 0.0});
  d.finalize();
  return d;
}

WeightDistribution WeightDistribution::polynomial_density(std::vector<double> coeffs,
                                                          double a, double b) {
  if (!(0.0 <= a && a < b)) throw BadConfig("polynomial density needs 0 <= a < b");
  if (coeffs.empty()) throw BadConfig("polynomial density needs coefficients");
  DensityPiece piece{a, b, coeffs, 0.0};
  if (std::abs(piece.mass(a, b) - 1.0) > 1e-12)
    throw BadConfig("polynomial density must integrate to 1 over [a, b]");
  for (int i = 0; i <= 4096; ++i) {
    const double w = a + (b - a) * i / 4096.0;
    if (poly_eval(coeffs, w) < -1e-12) throw BadConfig("polynomial density is negative");
  }
  WeightDistribution d;
  d.kind_ = WeightKind::PolynomialDensity;
  d.pieces_.push_back(std::move(piece));
  d.finalize();
  return d;
}

WeightDistribution WeightDistribution::exponential(double rate) {
  if (!(rate > 0.0)) throw BadConfig("exponential rate must be positive");
  WeightDistribution d;
  d.kind_ = WeightKind::Exponential;
  // Quadrature cap: mass beyond 45/rate is ~3e-20, far below every tolerance.
  d.pieces_.push_back({0.0, 45.0 / rate, {}, rate});
  d.finalize();
  d.support_sup_ = kInf;
  return d;
}

WeightDistribution WeightDistribution::truncated_plus(const WeightDistribution& base,
                                                      double eps) {
  const double wstar = base.support_sup_;
  if (!std::isfinite(wstar))
    throw BadConfig("truncated_plus requires a bounded base distribution");
  const double cut = wstar - eps;
  if (!(cut > base.support_inf_))
    throw BadConfig("truncation epsilon must cut strictly inside the support");
  WeightDistribution d;
  d.kind_ = WeightKind::TruncatedPlus;
  double moved = 0.0;
  for (const auto& a : base.atoms_) {
    if (a.value <= cut)
      d.atoms_.push_back(a);
    else
      moved += a.prob;
  }
  for (const auto& p : base.pieces_) {
    if (p.lo >= cut) {
      moved += p.mass(p.lo, p.hi);
      continue;
    }
    DensityPiece clipped = p;
    if (clipped.hi > cut) {
      moved += p.mass(cut, p.hi);
      clipped.hi = cut;
    }
    d.pieces_.push_back(clipped);
  }
  if (moved > 0.0) d.atoms_.push_back({wstar, moved});
  d.trunc_base_ = std::make_shared<WeightDistribution>(base);
  d.trunc_eps_ = eps;
  d.finalize();
  return d;
}

WeightDistribution WeightDistribution::truncated_minus(const WeightDistribution& base,
                                                       double eps) {
  const double wstar = base.support_sup_;
  if (!std::isfinite(wstar))
    throw BadConfig("truncated_minus requires a bounded base distribution");
  const double cut = wstar - eps;
  if (!(cut > base.support_inf_))
    throw BadConfig("truncation epsilon must cut strictly inside the support");
  WeightDistribution d;
  d.kind_ = WeightKind::TruncatedMinus;
  double moved = 0.0;
  for (const auto& a : base.atoms_) {
    if (a.value < cut)
      d.atoms_.push_back(a);
    else
      moved += a.prob;
  }
  for (const auto& p : base.pieces_) {
    if (p.lo >= cut) {
      moved += p.mass(p.lo, p.hi);
      continue;
    }
    DensityPiece clipped = p;
    if (clipped.hi > cut) {
      moved += p.mass(cut, p.hi);
      clipped.hi = cut;
    }
    d.pieces_.push_back(clipped);
  }
  if (moved > 0.0) d.atoms_.push_back({cut, moved});
  d.trunc_base_ = std::make_shared<WeightDistribution>(base);
  d.trunc_eps_ = eps;
  d.finalize();
  return d;
}

void WeightDistribution::finalize() {
  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom& a, const Atom& b) { return a.value < b.value; });
  // Merge duplicate atom values.
  std::vector<Atom> merged;
  for (const auto& a : atoms_) {
    if (!merged.empty() && merged.back().value == a.value)
      merged.back().prob += a.prob;
    else
      merged.push_back(a);
  }
  atoms_ = std::move(merged);
  std::sort(pieces_.begin(), pieces_.end(),
            [](const DensityPiece& a, const DensityPiece& b) { return a.lo < b.lo; });

  support_inf_ = kInf;
  support_sup_ = -kInf;
  cum_.clear();
  double total = 0.0;
  for (const auto& a : atoms_) {
    support_inf_ = std::min(support_inf_, a.value);
    support_sup_ = std::max(support_sup_, a.value);
    total += a.prob;
    cum_.push_back(total);
  }
  for (const auto& p : pieces_) {
    support_inf_ = std::min(support_inf_, p.lo);
    support_sup_ = std::max(support_sup_, p.hi);
    total += p.mass(p.lo, p.hi);
    cum_.push_back(total);
  }
  total_mass_ = total;
  if (std::abs(total_mass_ - 1.0) > 1e-9)
    throw BadConfig("distribution mass must be 1, got " + std::to_string(total_mass_));
  has_atom_at_sup_ = false;
  for (const auto& a : atoms_)
    if (a.value == support_sup_) has_atom_at_sup_ = true;
}

double WeightDistribution::atom_mass() const {
  double m = 0.0;
  for (const auto& a : atoms_) m += a.prob;
  return m;
}

double WeightDistribution::sample(SplitMix64& rng) const {
  if (kind_ == WeightKind::Exponential) return rng.next_exponential(pieces_[0].exp_rate);
  const double u = rng.next_unit() * total_mass_;
  std::size_t seg = 0;
  while (seg + 1 < cum_.size() && u >= cum_[seg]) ++seg;
  if (seg < atoms_.size()) return atoms_[seg].value;

  const DensityPiece& p = pieces_[seg - atoms_.size()];
  const double below = seg == 0 ? 0.0 : cum_[seg - 1];
  const double target = u - below;  // conditional mass inside this piece
  if (p.poly.empty()) {
    const double elo = std::exp(-p.exp_rate * p.lo);
    return -std::log(elo - target) / p.exp_rate;
  }
  // Invert the polynomial CDF with bisection-guarded Newton.
  const auto F = poly_antiderivative(p.poly);
  const double Flo = poly_eval(F, p.lo);
  double lo = p.lo, hi = p.hi;
  double w = 0.5 * (lo + hi);
  for (int it = 0; it < 128; ++it) {
    const double err = (poly_eval(F, w) - Flo) - target;
    if (err > 0.0)
      hi = w;
    else
      lo = w;
    const double deriv = poly_eval(p.poly, w);
    double next = deriv > 0.0 ? w - err / deriv : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - w) < 1e-16 * (p.hi - p.lo)) {
      w = next;
      break;
    }
    w = next;
  }
  if (w >= p.hi) w = std::nextafter(p.hi, p.lo);
  if (w < p.lo) w = p.lo;
  return w;
}

double WeightDistribution::expect(const WeightFunctional& phi,
                                  const QuadratureSpec& spec) const {
  double total = 0.0;
  for (const auto& a : atoms_) {
    const double v = phi.fn(a.value);
    if (std::isinf(v)) return v;  // divergence sentinel via an atom
    if (std::isnan(v)) throw NonConvergentQuadrature("functional is NaN at an atom");
    total += a.prob * v;
  }
  Integrator integ(spec);
  for (const auto& p : pieces_) {
    auto f = [&](double w) { return phi.fn(w) * p.pdf(w); };
    double part;
    if (phi.singular_at && *phi.singular_at > p.lo && *phi.singular_at < p.hi) {
      const double s = *phi.singular_at;
      part = integ.integrate(f, p.lo, s, phi.breakpoints, s);
      if (!std::isinf(part))
        part += integ.integrate(f, s, p.hi, phi.breakpoints, s);
    } else {
      std::optional<double> hint;
      if (phi.singular_at && (*phi.singular_at == p.lo || *phi.singular_at == p.hi))
        hint = *phi.singular_at;
      part = integ.integrate(f, p.lo, p.hi, phi.breakpoints, hint);
    }
    if (std::isinf(part)) return part;
    if (std::isnan(part)) throw NonConvergentQuadrature("quadrature produced NaN");
    total += part;

    // Unbounded tails are capped for quadrature; probe doubling extension
    // segments so slowly-decaying or growing integrands are not silently cut.
    if (p.exp_rate > 0.0) {
      auto tail_f = [&](double w) {
        return phi.fn(w) * p.exp_rate * std::exp(-p.exp_rate * w);
      };
      double seg_lo = p.hi;
      double prev = std::numeric_limits<double>::infinity();
      int stall = 0;
      for (int j = 0; j < 60; ++j) {
        const double seg_hi = 2.0 * seg_lo;
        const double contrib = integ.integrate(tail_f, seg_lo, seg_hi, {}, {});
        if (std::isinf(contrib)) return contrib;
        total += contrib;
        const double scale = std::max(std::abs(total), 1e-300);
        if (std::abs(contrib) < 1e-16 * scale) break;
        if (std::isfinite(prev) && std::abs(contrib) >= 0.999 * std::abs(prev))
          ++stall;
        else
          stall = 0;
        if (stall >= 3) return std::numeric_limits<double>::infinity();
        prev = contrib;
        seg_lo = seg_hi;
      }
    }
  }
  return total;
}

double WeightDistribution::measure(const BinSet& B) const {
  double m = 0.0;
  for (const auto& a : atoms_)
    if (B.contains(a.value)) m += a.prob;
  for (const auto& p : pieces_)
    for (const auto& iv : B.intervals()) m += p.mass(iv.lo, iv.hi);
  return m;
}

namespace detail {

nlohmann::json weight_to_json(const WeightDistribution& d) {
  nlohmann::json j;
  switch (d.kind()) {
    case WeightKind::PointMass:
      j = {{"kind", "point_mass"}, {"value", d.atoms()[0].value}};
      break;
    case WeightKind::FiniteAtoms: {
      nlohmann::json atoms = nlohmann::json::array();
      for (const auto& a : d.atoms()) atoms.push_back({a.value, a.prob});
      j = {{"kind", "finite_atoms"}, {"atoms", atoms}};
      break;
    }
    case WeightKind::Uniform:
      j = {{"kind", "uniform"}, {"a", d.pieces()[0].lo}, {"b", d.pieces()[0].hi}};
      break;
    case WeightKind::PolynomialDensity:
      j = {{"kind", "polynomial_density"},
           {"coeffs", d.pieces()[0].poly},
           {"a", d.pieces()[0].lo},
           {"b", d.pieces()[0].hi}};
      break;
    case WeightKind::Exponential:
      j = {{"kind", "exponential"}, {"rate", d.pieces()[0].exp_rate}};
      break;
    case WeightKind::TruncatedPlus:
    case WeightKind::TruncatedMinus:
      j = {{"kind", d.kind() == WeightKind::TruncatedPlus ? "truncated_plus"
                                                          : "truncated_minus"},
           {"base", weight_to_json(d.truncation_base())},
           {"epsilon", d.truncation_eps()}};
      break;
  }
  return j;
}

WeightDistribution weight_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw BadConfig("weight spec must be an object with a 'kind' tag");
  const std::string kind = j.at("kind").get<std::string>();
  auto num = [&](const char* key) {
    if (!j.contains(key) || !j.at(key).is_number())
      throw BadConfig(std::string("weight spec missing numeric field '") + key + "'");
    return j.at(key).get<double>();
  };
  if (kind == "point_mass") return WeightDistribution::point_mass(num("value"));
  if (kind == "uniform") return WeightDistribution::uniform(num("a"), num("b"));
  if (kind == "exponential") return WeightDistribution::exponential(num("rate"));
  if (kind == "finite_atoms") {
    if (!j.contains("atoms") || !j.at("atoms").is_array())
      throw BadConfig("finite_atoms needs an 'atoms' array of [value, prob] pairs");
    std::vector<Atom> atoms;
    for (const auto& a : j.at("atoms")) {
      if (!a.is_array() || a.size() != 2)
        throw BadConfig("each atom must be a [value, prob] pair");
      atoms.push_back({a[0].get<double>(), a[1].get<double>()});
    }
    return WeightDistribution::finite_atoms(std::move(atoms));
  }
  if (kind == "polynomial_density") {
    if (!j.contains("coeffs") || !j.at("coeffs").is_array())
      throw BadConfig("polynomial_density needs a 'coeffs' array");
    std::vector<double> coeffs;
    for (const auto& c : j.at("coeffs")) coeffs.push_back(c.get<double>());
    return WeightDistribution::polynomial_density(std::move(coeffs), num("a"), num("b"));
  }
  if (kind == "truncated_plus" || kind == "truncated_minus") {
    if (!j.contains("base")) throw BadConfig("truncation needs a 'base' weight spec");
    WeightDistribution base = weight_from_json(j.at("base"));
    const double eps = num("epsilon");
    return kind == "truncated_plus" ? WeightDistribution::truncated_plus(base, eps)
                                    : WeightDistribution::truncated_minus(base, eps);
  }
  throw BadConfig("unknown weight kind '" + kind + "'");
}

}  // namespace detail

std::string WeightDistribution::to_json_string() const {
  return detail::weight_to_json(*this).dump();
}

WeightDistribution WeightDistribution::from_json_string(const std::string& text) {
  return detail::weight_from_json(nlohmann::json::parse(text));
}

}  // namespace rif
