#pragma once

#include <cstdint>
#include <vector>

namespace rif {

// Dynamic weighted sampling over mutable nonnegative weights: O(log n)
// update and prefix-search sample via a binary indexed layout. sample(u)
// returns the smallest index i with prefix_sum(i) > u * total, so zero-weight
// entries are never returned and u = 0 is valid while u = 1 is excluded.
class WeightedIndex {
 public:
  WeightedIndex() = default;
  explicit WeightedIndex(const std::vector<double>& weights);

  static WeightedIndex build(const std::vector<double>& weights) {
    return WeightedIndex(weights);
  }

  void update(std::size_t i, double new_weight);
  void append(double weight);
  std::size_t sample(double u) const;

  std::size_t size() const { return n_; }
  double total() const { return total_ + comp_; }
  double weight(std::size_t i) const;

  // Exact recomputation from the raw weights (drift control / tests).
  void rebuild();
  std::uint64_t updates_since_rebuild() const { return updates_since_rebuild_; }

 private:
  void ensure_capacity(std::size_t n);
  void add(std::size_t pos, double delta);  // 1-based position in tree_
  double tree_total() const;                // prefix sum over all entries
  void maybe_rebuild();

  std::size_t n_ = 0;
  std::vector<double> tree_;  // 1-based Fenwick array
  std::vector<double> raw_;
  double total_ = 0.0;
  double comp_ = 0.0;  // Neumaier compensation for the shadow total
  std::uint64_t updates_since_rebuild_ = 0;
};

}  // namespace rif
