#include <doctest.h>

#include <cmath>
#include <vector>

#include "rif/errors.hpp"
#include "rif/rng.hpp"
#include "rif/sampler.hpp"
#include "support/oracles.hpp"

using rif::SplitMix64;
using rif::WeightedIndex;

TEST_CASE("build totals and all-zero rejection") {
  WeightedIndex idx({1.0, 2.0, 3.0});
  CHECK(idx.total() == doctest::Approx(6.0));
  WeightedIndex sparse({0.0, 0.0, 5.0});
  CHECK(sparse.total() == doctest::Approx(5.0));
  for (double u : {0.0, 0.3, 0.7, 0.999}) CHECK(sparse.sample(u) == 2);
  CHECK_THROWS_AS(WeightedIndex(std::vector<double>{0.0, 0.0, 0.0}), rif::AllZero);
  CHECK_THROWS_AS(WeightedIndex(std::vector<double>{}), rif::AllZero);
}

TEST_CASE("update adjusts the total and supports death") {
  WeightedIndex idx({1.0, 2.0, 3.0});
  idx.update(1, 5.0);
  CHECK(idx.total() == doctest::Approx(9.0));
  CHECK_THROWS_AS(idx.update(3, 1.0), rif::OutOfRange);

  idx.update(1, 0.0);  // dead vertex: never sampled again
  for (double u = 0.0; u < 1.0; u += 0.01) CHECK(idx.sample(u) != 1);

  // Idempotence: a second identical update changes nothing observable.
  WeightedIndex a({1.0, 2.0, 3.0}), b({1.0, 2.0, 3.0});
  a.update(2, 0.5);
  b.update(2, 0.5);
  b.update(2, 0.5);
  CHECK(a.total() == b.total());
  for (double u = 0.0; u < 1.0; u += 0.001) CHECK(a.sample(u) == b.sample(u));
}

TEST_CASE("boundary convention") {
  WeightedIndex idx({1.0, 2.0, 3.0});
  CHECK(idx.sample(0.0) == 0);
  // u = 0.5: target 3.0; prefix(1) = 3 is not > 3, so the answer is index 2.
  CHECK(idx.sample(0.5) == 2);
  WeightedIndex lone({0.0, 7.0, 0.0});
  for (double u : {0.0, 0.2, 0.5, 0.9}) CHECK(lone.sample(u) == 1);
}

TEST_CASE("oracle equivalence on random instances") {
  SplitMix64 rng(2024);
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t n = 1 + rng.next_u64() % 1000;
    std::vector<double> w(n);
    bool any = false;
    for (auto& x : w) {
      x = rng.next_unit() < 0.2 ? 0.0 : rng.next_unit();
      any = any || x > 0.0;
    }
    if (!any) w[rng.next_u64() % n] = 0.5;
    WeightedIndex idx(w);
    for (int q = 0; q < 30; ++q) {
      const double u = rng.next_unit();
      CHECK(idx.sample(u) == oracle::linear_scan_sample(w, u));
    }
  }
}

TEST_CASE("append matches a fresh build") {
  SplitMix64 rng(5);
  std::vector<double> w = {0.5};
  WeightedIndex idx(w);
  for (int i = 0; i < 300; ++i) {
    const double x = rng.next_unit();
    w.push_back(x);
    idx.append(x);
  }
  WeightedIndex fresh(w);
  CHECK(idx.total() == doctest::Approx(fresh.total()).epsilon(1e-12));
  for (double u = 0.0; u < 1.0; u += 0.001) CHECK(idx.sample(u) == fresh.sample(u));
}

TEST_CASE("statistical frequencies at 6 standard errors") {
  SplitMix64 rng(77);
  const std::size_t n = 100;
  std::vector<double> w(n);
  for (auto& x : w) x = 0.1 + rng.next_unit();
  WeightedIndex idx(w);
  const double total = idx.total();
  std::vector<int> hits(n, 0);
  const int draws = 1000000;
  for (int i = 0; i < draws; ++i) ++hits[idx.sample(rng.next_unit())];
  for (std::size_t i = 0; i < n; ++i) {
    const double p = w[i] / total;
    const double se = std::sqrt(p * (1.0 - p) / draws);
    CHECK(std::abs(hits[i] / static_cast<double>(draws) - p) < 6.0 * se);
  }
}

TEST_CASE("total stays exact through a million updates") {
  SplitMix64 rng(13);
  const std::size_t n = 4096;
  std::vector<double> w(n);
  for (auto& x : w) x = rng.next_unit();
  WeightedIndex idx(w);
  for (int i = 0; i < 1000000; ++i) {
    const std::size_t j = rng.next_u64() % n;
    const double x = rng.next_unit() * 10.0;
    w[j] = x;
    idx.update(j, x);
  }
  WeightedIndex fresh(w);
  CHECK(idx.total() == doctest::Approx(fresh.total()).epsilon(1e-9));
}
