#include <doctest.h>

#include <cmath>

#include "rif/errors.hpp"
#include "rif/limits.hpp"
#include "support/oracles.hpp"

using rif::BinSet;
using rif::Expr;
using rif::FitnessModel;
using rif::Regime;
using rif::RegimeReport;
using rif::SolveOptions;
using rif::WeightDistribution;

namespace {

BinSet one_bin(double lo, double hi) {
  BinSet b;
  b.add_interval(lo, hi);
  return b;
}

struct Model {
  WeightDistribution dist;
  FitnessModel fm;
  RegimeReport rep;
};

Model solved(WeightDistribution dist, FitnessModel fm) {
  auto rep = rif::solve_malthusian(dist, fm, SolveOptions{});
  return {std::move(dist), std::move(fm), rep};
}

Model port() {
  return solved(WeightDistribution::point_mass(1.0),
                FitnessModel::gpaf(Expr::constant(1.0), Expr::constant(1.0), 1));
}

Model wrrt() {
  return solved(WeightDistribution::point_mass(1.0),
                FitnessModel::constant_in_degree(Expr::identity(), 1));
}

Model condensation() {
  return solved(WeightDistribution::polynomial_density({2.0, -2.0}, 0.0, 1.0),
                FitnessModel::gpaf(Expr::identity(), Expr::constant(0.25), 1));
}

}  // namespace

TEST_CASE("PORT degree law matches 4/((k+1)(k+2)(k+3))") {
  auto m = port();
  const auto law = rif::degree_law(m.dist, m.fm, m.rep, one_bin(0.0, 2.0), 64);
  CHECK(law.p[0][0] == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(law.p[1][0] == doctest::Approx(1.0 / 6.0).epsilon(1e-9));
  CHECK(law.p[2][0] == doctest::Approx(1.0 / 15.0).epsilon(1e-9));
  for (std::int64_t k = 0; k <= 64; ++k)
    CHECK(law.p[static_cast<std::size_t>(k)][0] ==
          doctest::Approx(oracle::port_pk(k)).epsilon(1e-8));
}

TEST_CASE("WRRT degree law is 2^-(k+1)") {
  auto m = wrrt();
  const auto law = rif::degree_law(m.dist, m.fm, m.rep, one_bin(0.0, 2.0), 40);
  for (std::int64_t k = 0; k <= 40; ++k)
    CHECK(law.p[static_cast<std::size_t>(k)][0] ==
          doctest::Approx(oracle::wrrt_pk(k)).epsilon(1e-9));
}

TEST_CASE("Cayley two-state law") {
  auto m = solved(WeightDistribution::point_mass(1.0),
                  FitnessModel::cayley(Expr::identity(), 2));
  const auto law = rif::degree_law(m.dist, m.fm, m.rep, one_bin(0.0, 2.0), 10);
  CHECK(law.p[0][0] == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(law.p[1][0] == doctest::Approx(0.5).epsilon(1e-8));
  for (std::int64_t k = 2; k <= 10; ++k) CHECK(law.p[static_cast<std::size_t>(k)][0] == 0.0);
  CHECK(law.tail_mass[0] == 0.0);
}

TEST_CASE("condensation degree law against an independent Simpson oracle") {
  auto m = condensation();
  const auto law = rif::degree_law(m.dist, m.fm, m.rep, one_bin(0.0, 1.0), 16);
  for (std::int64_t k = 0; k <= 16; ++k) {
    const double expected = oracle::simpson(
        [&](double w) {
          double prod = 1.0;
          for (std::int64_t i = 0; i < k; ++i) {
            const double f = w * i + 0.25;
            prod *= f / (f + 1.0);
          }
          const double fk = w * k + 0.25;
          return 2.0 * (1.0 - w) * prod / (fk + 1.0);
        },
        0.0, 1.0, 40000);
    CHECK(law.p[static_cast<std::size_t>(k)][0] ==
          doctest::Approx(expected).epsilon(1e-7));
  }
}

TEST_CASE("degree law mass accounting") {
  for (auto& m : {port(), wrrt(), condensation()}) {
    const auto law = rif::degree_law(m.dist, m.fm, m.rep, one_bin(0.0, 2.0), 2000);
    double tail = 0.0;
    for (double v : law.tail_mass) tail += v;
    CHECK(law.total_mass() + tail == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("edge law per regime") {
  // C1: continuous mass integrates to 1, no atom.
  auto m = wrrt();
  auto edges = rif::edge_law(m.dist, m.fm, m.rep, one_bin(0.0, 2.0));
  CHECK(edges.atom_at_wstar == 0.0);
  CHECK(edges.total() == doctest::Approx(1.0).epsilon(1e-6));

  // Condensation: atom of exactly 1 - m* = 0.5.
  auto c = condensation();
  edges = rif::edge_law(c.dist, c.fm, c.rep, one_bin(0.0, 1.0));
  CHECK(edges.atom_at_wstar == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(edges.total() == doctest::Approx(1.0).epsilon(1e-6));

  // Degenerate: the fittest take all.
  RegimeReport degen;
  degen.regime = Regime::Degenerate;
  auto u = WeightDistribution::uniform(0.0, 1.0);
  auto fm = FitnessModel::gpaf(Expr::recip(1.0), Expr::recip(1.0), 1);
  edges = rif::edge_law(u, fm, degen, one_bin(0.0, 1.0));
  CHECK(edges.atom_at_wstar == 1.0);
  CHECK(edges.continuous[0] == 0.0);
}

TEST_CASE("telescoping identity: degree table vs edge law per bin") {
  BinSet halves;
  halves.add_interval(0.0, 0.5);
  halves.add_interval(0.5, 1.0);

  auto bb = solved(WeightDistribution::uniform(0.0, 1.0),
                   FitnessModel::gpaf(Expr::identity(), Expr::identity(), 1));
  const std::int64_t K = 10000;
  const auto law = rif::degree_law(bb.dist, bb.fm, bb.rep, halves, K);
  const auto edges = rif::edge_law(bb.dist, bb.fm, bb.rep, halves);
  for (std::size_t j = 0; j < 2; ++j) {
    double lhs = law.edge_tail[j];
    for (std::int64_t k = 1; k <= K; ++k)
      lhs += static_cast<double>(k) * law.p[static_cast<std::size_t>(k)][j];
    CHECK(lhs == doctest::Approx(edges.continuous[j]).epsilon(1e-6));
  }
}

TEST_CASE("condensation: atom equals one minus the telescoped edge mass") {
  auto c = condensation();
  const std::int64_t K = 10000;
  const auto law = rif::degree_law(c.dist, c.fm, c.rep, one_bin(0.0, 1.0), K);
  const auto edges = rif::edge_law(c.dist, c.fm, c.rep, one_bin(0.0, 1.0));
  double edge_mass = law.edge_tail[0];
  for (std::int64_t k = 1; k <= K; ++k)
    edge_mass += static_cast<double>(k) * law.p[static_cast<std::size_t>(k)][0];
  CHECK(edges.atom_at_wstar == doctest::Approx(1.0 - edge_mass).epsilon(1e-6));
}

TEST_CASE("degenerate law is mu per bin") {
  BinSet halves;
  halves.add_interval(0.0, 0.5);
  halves.add_interval(0.5, 1.0);
  auto u = WeightDistribution::uniform(0.0, 1.0);
  auto law = rif::degenerate_law(u, halves);
  CHECK(law[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(law[1] == doctest::Approx(0.5).epsilon(1e-12));

  auto tri = WeightDistribution::polynomial_density({2.0, -2.0}, 0.0, 1.0);
  law = rif::degenerate_law(tri, halves);
  CHECK(law[0] == doctest::Approx(0.75).epsilon(1e-12));

  BinSet pm;
  pm.add_atom(1.0);
  law = rif::degenerate_law(WeightDistribution::point_mass(1.0), pm);
  CHECK(law[0] == 1.0);
}

TEST_CASE("fermi-dirac specialization") {
  // beta = 0 with ell = 2: alpha = 1 and p0(B) = mu(B)/2.
  auto energies = WeightDistribution::uniform(0.0, 1.0);
  auto m = solved(energies, FitnessModel::cayley(Expr::exponential(0.0), 2));
  REQUIRE(m.rep.regime == Regime::C1);
  CHECK(*m.rep.alpha == doctest::Approx(1.0).epsilon(1e-8));
  BinSet halves;
  halves.add_interval(0.0, 0.5);
  halves.add_interval(0.5, 1.0);
  auto p0 = rif::fermi_dirac_law(energies, m.fm, *m.rep.alpha, halves);
  CHECK(p0[0] == doctest::Approx(0.25).epsilon(1e-8));
  CHECK(p0[1] == doctest::Approx(0.25).epsilon(1e-8));

  // Point-mass energy at 0, beta = 1, ell = 2: alpha = 1, p0 = 1/2.
  auto pm = WeightDistribution::point_mass(0.0);
  auto m2 = solved(pm, FitnessModel::cayley(Expr::exponential(1.0), 2));
  CHECK(*m2.rep.alpha == doctest::Approx(1.0).epsilon(1e-8));
  auto p0pm = rif::fermi_dirac_law(pm, m2.fm, *m2.rep.alpha, one_bin(-1.0, 1.0));
  CHECK(p0pm[0] == doctest::Approx(0.5).epsilon(1e-8));

  // Two-state normalization: p0 + p1 = 1 on the full support.
  const auto law = rif::degree_law(m.dist, m.fm, m.rep, one_bin(0.0, 1.0), 4);
  CHECK(law.p[0][0] + law.p[1][0] == doctest::Approx(1.0).epsilon(1e-8));

  CHECK_THROWS_AS(rif::fermi_dirac_law(
                      energies,
                      FitnessModel::gpaf(Expr::constant(1.0), Expr::constant(1.0), 1),
                      1.0, halves),
                  rif::RequiresCayley);
}

TEST_CASE("power-law exponents") {
  auto m = port();
  CHECK(rif::power_law_exponent(m.fm, m.rep, 0.3) == doctest::Approx(3.0).epsilon(1e-9));

  auto bb = solved(WeightDistribution::uniform(0.0, 1.0),
                   FitnessModel::gpaf(Expr::identity(), Expr::identity(), 1));
  CHECK(rif::power_law_exponent(bb.fm, bb.rep, 1.0) ==
        doctest::Approx(1.0 + *bb.rep.alpha).epsilon(1e-9));

  auto c = condensation();
  CHECK(rif::power_law_exponent(c.fm, c.rep, 1.0) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("monotone response of the condensation atom in h") {
  auto tri = WeightDistribution::polynomial_density({2.0, -2.0}, 0.0, 1.0);
  double prev_atom = 1.0;
  for (double c : {0.1, 0.2, 0.3, 0.4, 0.45}) {
    auto fm = FitnessModel::gpaf(Expr::identity(), Expr::constant(c), 1);
    auto rep = rif::solve_malthusian(tri, fm, SolveOptions{});
    REQUIRE(rep.regime == Regime::Condensation);
    const double atom = 1.0 - *rep.m_star;
    CHECK(atom <= prev_atom + 1e-12);
    CHECK(atom == doctest::Approx(1.0 - 2.0 * c).epsilon(1e-9));
    prev_atom = atom;
  }
}

TEST_CASE("regime guards") {
  RegimeReport degen;
  degen.regime = Regime::Degenerate;
  auto u = WeightDistribution::uniform(0.0, 1.0);
  auto fm = FitnessModel::gpaf(Expr::identity(), Expr::identity(), 1);
  CHECK_THROWS_AS(rif::degree_law(u, fm, degen, one_bin(0.0, 1.0), 8),
                  rif::UnsupportedRegime);

  RegimeReport cond;
  cond.regime = Regime::Condensation;
  auto cay = FitnessModel::cayley(Expr::identity(), 1);
  CHECK_THROWS_AS(rif::degree_law(u, cay, cond, one_bin(0.0, 1.0), 8), rif::NotGpaf);
  CHECK_THROWS_AS(rif::power_law_exponent(cay, cond, 0.5), rif::NotGpaf);
}
