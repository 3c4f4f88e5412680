#pragma once

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "rif/errors.hpp"

namespace rif {

// Half-open interval [lo, hi).
struct Interval {
  double lo;
  double hi;
};

// Measurable sets are finite unions of half-open intervals plus explicitly
// addressed atoms. Used both as a plain set (indicator semantics, strictly
// half-open) and as a binning of the weight axis (cells = intervals in the
// order given, then atoms; a weight equal to the top endpoint of the binning
// falls into the interval that ends there, so partitions of [a, w*] close
// cleanly at the top).
class BinSet {
 public:
  BinSet() = default;

  BinSet& add_interval(double lo, double hi) {
    if (!(lo < hi)) throw BadConfig("bin interval needs lo < hi");
    intervals_.push_back({lo, hi});
    return *this;
  }
  BinSet& add_atom(double v) {
    atoms_.push_back(v);
    return *this;
  }

  static BinSet whole_line() {
    BinSet b;
    b.add_interval(0.0, std::numeric_limits<double>::infinity());
    return b;
  }

  // Strict membership: [lo, hi) plus exact atom matches.
  bool contains(double w) const {
    for (double a : atoms_)
      if (w == a) return true;
    for (const auto& iv : intervals_)
      if (w >= iv.lo && w < iv.hi) return true;
    return false;
  }

  // Cell index for binning, or -1. Atoms take precedence over intervals.
  int cell_index(double w) const {
    for (std::size_t i = 0; i < atoms_.size(); ++i)
      if (w == atoms_[i]) return static_cast<int>(intervals_.size() + i);
    for (std::size_t i = 0; i < intervals_.size(); ++i)
      if (w >= intervals_[i].lo && w < intervals_[i].hi) return static_cast<int>(i);
    // Top closure: the largest interval endpoint absorbs its own boundary.
    double top = -std::numeric_limits<double>::infinity();
    int top_idx = -1;
    for (std::size_t i = 0; i < intervals_.size(); ++i) {
      if (intervals_[i].hi > top) {
        top = intervals_[i].hi;
        top_idx = static_cast<int>(i);
      }
    }
    if (top_idx >= 0 && w == top) return top_idx;
    return -1;
  }

  std::size_t cell_count() const { return intervals_.size() + atoms_.size(); }
  const std::vector<Interval>& intervals() const { return intervals_; }
  const std::vector<double>& atoms() const { return atoms_; }

  // Single-cell view (for per-cell expectations).
  BinSet cell(std::size_t i) const {
    BinSet b;
    if (i < intervals_.size()) {
      b.intervals_.push_back(intervals_[i]);
    } else {
      b.atoms_.push_back(atoms_.at(i - intervals_.size()));
    }
    return b;
  }

  // Human-readable cell bounds for CSV output.
  std::pair<double, double> cell_bounds(std::size_t i) const {
    if (i < intervals_.size()) return {intervals_[i].lo, intervals_[i].hi};
    const double a = atoms_.at(i - intervals_.size());
    return {a, a};
  }

  std::vector<double> edges() const {
    std::vector<double> e;
    for (const auto& iv : intervals_) {
      e.push_back(iv.lo);
      e.push_back(iv.hi);
    }
    for (double a : atoms_) e.push_back(a);
    return e;
  }

 private:
  std::vector<Interval> intervals_;
  std::vector<double> atoms_;
};

}  // namespace rif
