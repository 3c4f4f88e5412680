#include "rif/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "rif/errors.hpp"

namespace rif {

namespace {
constexpr std::uint64_t kRebuildPeriod = 1ULL << 20;

void neumaier_add(double& sum, double& comp, double v) {
  const double t = sum + v;
  if (std::abs(sum) >= std::abs(v))
    comp += (sum - t) + v;
  else
    comp += (v - t) + sum;
  sum = t;
}
}  // namespace

WeightedIndex::WeightedIndex(const std::vector<double>& weights) {
  double positive = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw OutOfRange("weights must be nonnegative");
    positive += w;
  }
  if (weights.empty() || positive == 0.0)
    throw AllZero("weighted index needs at least one positive weight");
  raw_ = weights;
  n_ = weights.size();
  rebuild();
}

void WeightedIndex::ensure_capacity(std::size_t n) {
  if (tree_.size() < n + 1) {
    std::size_t cap = std::max<std::size_t>(16, tree_.size());
    while (cap < n + 1) cap *= 2;
    tree_.resize(cap, 0.0);
  }
}

void WeightedIndex::rebuild() {
  ensure_capacity(n_);
  std::fill(tree_.begin(), tree_.end(), 0.0);
  // O(n) Fenwick construction.
  for (std::size_t i = 1; i <= n_; ++i) {
    tree_[i] += raw_[i - 1];
    const std::size_t parent = i + (i & (~i + 1));
    if (parent <= n_) tree_[parent] += tree_[i];
  }
  total_ = 0.0;
  comp_ = 0.0;
  for (double w : raw_) neumaier_add(total_, comp_, w);
  total_ += comp_;
  comp_ = 0.0;
  updates_since_rebuild_ = 0;
}

void WeightedIndex::add(std::size_t pos, double delta) {
  for (; pos <= n_; pos += pos & (~pos + 1)) tree_[pos] += delta;
}

void WeightedIndex::update(std::size_t i, double new_weight) {
  if (i >= n_) throw OutOfRange("weighted index update out of range");
  if (new_weight < 0.0) throw OutOfRange("weights must be nonnegative");
  const double delta = new_weight - raw_[i];
  raw_[i] = new_weight;
  add(i + 1, delta);
  neumaier_add(total_, comp_, delta);
  ++updates_since_rebuild_;
  maybe_rebuild();
}

void WeightedIndex::append(double weight) {
  if (weight < 0.0) throw OutOfRange("weights must be nonnegative");
  raw_.push_back(weight);
  ++n_;
  if (tree_.size() < n_ + 1) {
    rebuild();  // capacity growth; amortized O(1) per append
    return;
  }
  // A fresh Fenwick slot must start as the sum of the trailing block it covers.
  const std::size_t i = n_;
  double v = weight;
  const std::size_t lsb = i & (~i + 1);
  for (std::size_t step = 1; step < lsb; step *= 2) v += tree_[i - step];
  tree_[i] = v;
  neumaier_add(total_, comp_, weight);
  ++updates_since_rebuild_;
  maybe_rebuild();
}

double WeightedIndex::tree_total() const {
  double sum = 0.0;
  for (std::size_t pos = n_; pos > 0; pos -= pos & (~pos + 1)) sum += tree_[pos];
  return sum;
}

void WeightedIndex::maybe_rebuild() {
  if (updates_since_rebuild_ >= kRebuildPeriod) {
    rebuild();
    return;
  }
  // Cheap drift check against the compensated shadow total.
  if ((updates_since_rebuild_ & 0xFFF) == 0) {
    const double shadow = total_ + comp_;
    const double tree = tree_total();
    if (std::abs(tree - shadow) > 1e-7 * std::max(std::abs(shadow), 1e-300)) rebuild();
  }
}

double WeightedIndex::weight(std::size_t i) const {
  if (i >= n_) throw OutOfRange("weighted index read out of range");
  return raw_[i];
}

std::size_t WeightedIndex::sample(double u) const {
  const double tot = total_ + comp_;

  if (!(tot > 0.0)) throw AllZero("cannot sample: total weight is zero");
  double rem = u * tot;
  std::size_t pos = 0;
  std::size_t bit = 1;
  while ((bit << 1) <= n_) bit <<= 1;
  for (; bit != 0; bit >>= 1) {
    const std::size_t next = pos + bit;
    if (next <= n_ && tree_[next] <= rem) {
      rem -= tree_[next];
      pos = next;
    }
  }
  // pos = count of fully consumed entries, i.e. the answer in 0-based terms.
  std::size_t idx = pos;
  if (idx >= n_) idx = n_ - 1;  // u*total hit the top by rounding
  // Never return a zero-weight entry (possible only through fp boundary ties).
  while (idx > 0 && raw_[idx] == 0.0) --idx;
  while (idx < n_ - 1 && raw_[idx] == 0.0) ++idx;
  return idx;
}

}  // namespace rif
