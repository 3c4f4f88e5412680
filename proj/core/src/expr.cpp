#include "rif/expr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "detail_json.hpp"
#include "rif/errors.hpp"

namespace rif {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Expr Expr::constant(double v) { return Expr(Kind::Const, v, 0.0); }
Expr Expr::identity() { return Expr(Kind::Id, 0.0, 0.0); }
Expr Expr::affine(double a, double b) { return Expr(Kind::Affine, a, b); }
Expr Expr::power(double p) { return Expr(Kind::Power, p, 0.0); }
Expr Expr::recip(double c) { return Expr(Kind::Recip, c, 0.0); }
Expr Expr::exponential(double beta) { return Expr(Kind::Exp, beta, 0.0); }

Expr Expr::min_of(Expr a, Expr b) {
  Expr e(Kind::Min, 0.0, 0.0);
  e.children_.push_back(std::move(a));
  e.children_.push_back(std::move(b));
  return e;
}

Expr Expr::max_of(Expr a, Expr b) {
  Expr e(Kind::Max, 0.0, 0.0);
  e.children_.push_back(std::move(a));
  e.children_.push_back(std::move(b));
  return e;
}

Expr Expr::scaled(double factor, Expr inner) {
  Expr e(Kind::Scale, factor, 0.0);
  e.children_.push_back(std::move(inner));
  return e;
}

double Expr::eval(double w) const {
  switch (kind_) {
    case Kind::Const:
      return p0_;
    case Kind::Id:
      return w;
    case Kind::Affine:
      return p0_ * w + p1_;
    case Kind::Power:
      return std::pow(w, p0_);
    case Kind::Recip: {
      const double d = p0_ - w;
      if (d == 0.0) return kInf;
      return 1.0 / d;
    }
    case Kind::Exp:
      return std::exp(p0_ * w);
    case Kind::Min:
      return std::min(children_[0].eval(w), children_[1].eval(w));
    case Kind::Max:
      return std::max(children_[0].eval(w), children_[1].eval(w));
    case Kind::Scale:
      return p0_ * children_[0].eval(w);
  }
  return 0.0;
}

double Expr::sup_on(double lo, double hi) const {
  switch (kind_) {
    case Kind::Const:
      return p0_;
    case Kind::Id:
      return hi;
    case Kind::Affine:
      return p0_ >= 0.0 ? (std::isinf(hi) && p0_ > 0.0 ? kInf : p0_ * hi + p1_)
                        : p0_ * lo + p1_;
    case Kind::Power:
      if (p0_ == 0.0) return 1.0;
      return p0_ > 0.0 ? std::pow(hi, p0_) : std::pow(lo, p0_);
    case Kind::Recip:
      if (hi >= p0_) return kInf;  // pole at or below the top of the interval
      return 1.0 / (p0_ - hi);
    case Kind::Exp:
      if (p0_ == 0.0) return 1.0;
      return p0_ > 0.0 ? std::exp(p0_ * hi) : std::exp(p0_ * lo);
    case Kind::Min:
      return std::min(children_[0].sup_on(lo, hi), children_[1].sup_on(lo, hi));
    case Kind::Max:
      return std::max(children_[0].sup_on(lo, hi), children_[1].sup_on(lo, hi));
    case Kind::Scale:
      if (p0_ == 0.0) return 0.0;
      return p0_ > 0.0 ? p0_ * children_[0].sup_on(lo, hi)
                       : p0_ * children_[0].inf_on(lo, hi);
  }
  return 0.0;
}

double Expr::inf_on(double lo, double hi) const {
  switch (kind_) {
    case Kind::Const:
      return p0_;
    case Kind::Id:
      return lo;
    case Kind::Affine:
      return p0_ >= 0.0 ? p0_ * lo + p1_
                        : (std::isinf(hi) ? -kInf : p0_ * hi + p1_);
    case Kind::Power:
      if (p0_ == 0.0) return 1.0;
      return p0_ > 0.0 ? std::pow(lo, p0_) : std::pow(hi, p0_);
    case Kind::Recip:
      if (hi >= p0_ && lo < p0_) return -kInf;  // pole inside: values below -1/eps
      if (lo >= p0_) return std::isinf(hi) ? 0.0 : 1.0 / (p0_ - hi);
      return 1.0 / (p0_ - lo);
    case Kind::Exp:
      if (p0_ == 0.0) return 1.0;
      return p0_ > 0.0 ? std::exp(p0_ * lo) : std::exp(p0_ * hi);
    case Kind::Min:
      return std::min(children_[0].inf_on(lo, hi), children_[1].inf_on(lo, hi));
    case Kind::Max:
      return std::max(children_[0].inf_on(lo, hi), children_[1].inf_on(lo, hi));
    case Kind::Scale:
      if (p0_ == 0.0) return 0.0;
      return p0_ > 0.0 ? p0_ * children_[0].inf_on(lo, hi)
                       : p0_ * children_[0].sup_on(lo, hi);
  }
  return 0.0;
}

bool Expr::has_pole_in(double lo, double hi) const {
  switch (kind_) {
    case Kind::Recip:
      return p0_ >= lo && p0_ <= hi;
    case Kind::Power:
      return p0_ < 0.0 && lo <= 0.0 && hi >= 0.0;
    case Kind::Min:
    case Kind::Max:
      return children_[0].has_pole_in(lo, hi) || children_[1].has_pole_in(lo, hi);
    case Kind::Scale:
      return children_[0].has_pole_in(lo, hi);
    default:
      return false;
  }
}

double Expr::pole_in(double lo, double hi) const {
  switch (kind_) {
    case Kind::Recip:
      return p0_;
    case Kind::Power:
      return 0.0;
    case Kind::Min:
    case Kind::Max:
      if (children_[0].has_pole_in(lo, hi)) return children_[0].pole_in(lo, hi);
      return children_[1].pole_in(lo, hi);
    case Kind::Scale:
      return children_[0].pole_in(lo, hi);
    default:
      throw Error("pole_in called on expression without a pole");
  }
}

Expr::Monotonicity Expr::monotonicity_on(double lo, double hi, int n) const {
  if (std::isinf(hi)) hi = std::max(1.0, lo) * 1e6;  // probe window for unbounded support
  bool up = true, down = true;
  double prev = eval(lo);
  for (int i = 1; i < n; ++i) {
    const double w = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    const double v = eval(w);
    if (v < prev) up = false;
    if (v > prev) down = false;
    prev = v;
  }
  if (up) return Monotonicity::NonDecreasing;
  if (down) return Monotonicity::NonIncreasing;
  return Monotonicity::Neither;
}

bool Expr::operator==(const Expr& other) const {
  return kind_ == other.kind_ && p0_ == other.p0_ && p1_ == other.p1_ &&
         children_ == other.children_;
}

namespace detail {

nlohmann::json expr_to_json(const Expr& e) {
  using Kind = Expr::Kind;
  nlohmann::json j;
  switch (e.kind()) {
    case Kind::Const:
      j = {{"expr", "const"}, {"value", e.p0()}};
      break;
    case Kind::Id:
      j = {{"expr", "id"}};
      break;
    case Kind::Affine:
      j = {{"expr", "affine"}, {"a", e.p0()}, {"b", e.p1()}};
      break;
    case Kind::Power:
      j = {{"expr", "power"}, {"p", e.p0()}};
      break;
    case Kind::Recip:
      j = {{"expr", "recip"}, {"c", e.p0()}};
      break;
    case Kind::Exp:
      j = {{"expr", "exp"}, {"beta", e.p0()}};
      break;
    case Kind::Min:
    case Kind::Max:
      j = {{"expr", e.kind() == Kind::Min ? "min" : "max"},
           {"args", {expr_to_json(e.children()[0]), expr_to_json(e.children()[1])}}};
      break;
    case Kind::Scale:
      j = {{"expr", "scale"}, {"factor", e.p0()}, {"inner", expr_to_json(e.children()[0])}};
      break;
  }
  return j;
}

double require_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw BadConfig(std::string("expression missing numeric field '") + key + "'");
  return j.at(key).get<double>();
}

Expr expr_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("expr"))
    throw BadConfig("expression spec must be an object with an 'expr' tag");
  const std::string tag = j.at("expr").get<std::string>();
  if (tag == "const") return Expr::constant(require_number(j, "value"));
  if (tag == "id") return Expr::identity();
  if (tag == "affine") return Expr::affine(require_number(j, "a"), require_number(j, "b"));
  if (tag == "power") return Expr::power(require_number(j, "p"));
  if (tag == "recip") return Expr::recip(require_number(j, "c"));
  if (tag == "exp") return Expr::exponential(require_number(j, "beta"));
  if (tag == "min" || tag == "max") {
    if (!j.contains("args") || !j.at("args").is_array() || j.at("args").size() != 2)
      throw BadConfig("min/max expression needs an 'args' array of two specs");
    Expr a = expr_from_json(j.at("args")[0]);
    Expr b = expr_from_json(j.at("args")[1]);
    return tag == "min" ? Expr::min_of(std::move(a), std::move(b))
                        : Expr::max_of(std::move(a), std::move(b));
  }
  if (tag == "scale") {
    if (!j.contains("inner")) throw BadConfig("scale expression needs 'inner'");
    return Expr::scaled(require_number(j, "factor"), expr_from_json(j.at("inner")));
  }
  throw BadConfig("unknown expression tag '" + tag + "'");
}

}  // namespace detail

std::string Expr::to_json_string() const { return detail::expr_to_json(*this).dump(); }

Expr Expr::from_json_string(const std::string& text) {
  return detail::expr_from_json(nlohmann::json::parse(text));
}

}  // namespace rif
