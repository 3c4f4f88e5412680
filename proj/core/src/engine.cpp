#include "rif/engine.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>

#include "rif/errors.hpp"
#include "rif/rng.hpp"
#include "rif/sampler.hpp"

namespace rif {

namespace {

// Per-vertex fitness cache: every family in scope evaluates as a branch on
// two precomputed doubles, keeping the hot loop free of expression walks.
struct FitnessCache {
  explicit FitnessCache(const FitnessModel& fm) : fm_(fm), kind_(fm.kind()) {}

  void push_vertex(double w) {
    switch (kind_) {
      case FitnessKind::Gpaf:
        a_.push_back(fm_.g().eval(w));
        b_.push_back(fm_.h().eval(w));
        break;
      case FitnessKind::Cayley:
      case FitnessKind::ConstantInDegree:
        a_.push_back(0.0);
        b_.push_back(fm_.g().eval(w));
        break;
      case FitnessKind::Tabular:
        a_.push_back(0.0);
        b_.push_back(w);  // keep the weight; rows are evaluated on demand
        break;
    }
  }

  double eval(std::size_t v, std::int64_t k) const {
    switch (kind_) {
      case FitnessKind::Gpaf:
        return a_[v] * static_cast<double>(k) + b_[v];
      case FitnessKind::Cayley:
        return k == 0 ? b_[v] : 0.0;
      case FitnessKind::ConstantInDegree:
        return b_[v];
      case FitnessKind::Tabular:
        return fm_.eval(k, b_[v]);
    }
    return 0.0;
  }

 private:
  const FitnessModel& fm_;
  FitnessKind kind_;
  std::vector<double> a_;
  std::vector<double> b_;
};

struct WindowTracker {
  explicit WindowTracker(const std::vector<double>& lows) : lows_(lows) {
    mass_.assign(lows.size(), 0.0);
  }
  void on_attach(double parent_weight, int ell) {
    for (std::size_t i = 0; i < lows_.size(); ++i)
      if (parent_weight >= lows_[i]) mass_[i] += ell;
  }
  std::vector<double> normalized(std::int64_t t, int ell) const {
    std::vector<double> out(mass_.size(), 0.0);
    if (t > 0)
      for (std::size_t i = 0; i < mass_.size(); ++i)
        out[i] = mass_[i] / (static_cast<double>(ell) * static_cast<double>(t));
    return out;
  }

 private:
  std::vector<double> lows_;
  std::vector<double> mass_;
};

void check_capacity(std::int64_t t_final, int ell, const GrowOptions& opts) {
  if (t_final < 0) throw OutOfRange("t_final must be nonnegative");
  const std::size_t needed =
      1 + static_cast<std::size_t>(t_final) * static_cast<std::size_t>(ell);
  if (needed > opts.max_vertices)
    throw OutOfRange("run would create " + std::to_string(needed) +
                     " vertices, above the configured cap of " +
                     std::to_string(opts.max_vertices));
}

}  // namespace

double TreeState::recompute_partition(const FitnessModel& fm) const {
  double z = 0.0, comp = 0.0;
  for (std::size_t v = 0; v < weights.size(); ++v) {
    const double f = fm.eval(out_degree[v] / ell, weights[v]);
    const double t = z + f;
    comp += std::abs(z) >= std::abs(f) ? (z - t) + f : (f - t) + z;
    z = t;
  }
  return z + comp;
}

std::vector<std::int64_t> checkpoint_times(std::int64_t t_final) {
  std::vector<std::int64_t> ts;
  double x = 1.0;
  while (true) {
    const auto t = static_cast<std::int64_t>(std::ceil(x));
    if (t >= t_final) break;
    if (ts.empty() || ts.back() != t) ts.push_back(t);
    x *= 1.2;
  }
  if (t_final > 0) ts.push_back(t_final);
  return ts;
}

std::pair<TreeState, GrowthTrajectory> grow_discrete(const WeightDistribution& dist,
                                                     const FitnessModel& fm,
                                                     std::int64_t t_final,
                                                     std::uint64_t seed,
                                                     const GrowOptions& opts) {
  check_capacity(t_final, fm.ell(), opts);
  SplitMix64 rng(seed);
  const int ell = fm.ell();

  TreeState tree;
  tree.ell = ell;
  const std::size_t n_final = 1 + static_cast<std::size_t>(t_final) * ell;
  tree.parents.reserve(n_final);
  tree.out_degree.reserve(n_final);
  tree.weights.reserve(n_final);

  FitnessCache cache(fm);
  const double w0 = dist.sample(rng);
  tree.parents.push_back(0);
  tree.out_degree.push_back(0);
  tree.weights.push_back(w0);
  cache.push_vertex(w0);

  WeightedIndex idx(std::vector<double>{fm.eval(0, w0)});
  std::int64_t leaves = 1;
  WindowTracker windows(opts.profile_windows);

  GrowthTrajectory traj;
  const auto cps = checkpoint_times(t_final);
  std::size_t next_cp = 0;
  auto record = [&](std::int64_t t) {
    Checkpoint cp;
    cp.t = t;
    cp.z_over_t = t > 0 ? idx.total() / static_cast<double>(t) : idx.total();
    cp.leaf_count = static_cast<double>(leaves);
    cp.window_mass = windows.normalized(t, ell);
    traj.checkpoints.push_back(std::move(cp));
  };

  for (std::int64_t step = 1; step <= t_final; ++step) {
    const double u = rng.next_unit();
    const std::size_t j = idx.sample(u);
    const std::int64_t k_new = tree.out_degree[j] / ell + 1;
    if (tree.out_degree[j] == 0) --leaves;
    tree.out_degree[j] += ell;
    idx.update(j, cache.eval(j, k_new));
    windows.on_attach(tree.weights[j], ell);

    for (int c = 0; c < ell; ++c) {
      const double w = dist.sample(rng);
      tree.parents.push_back(static_cast<std::uint32_t>(j));
      tree.out_degree.push_back(0);
      tree.weights.push_back(w);
      cache.push_vertex(w);
      idx.append(fm.eval(0, w));
    }
    leaves += ell;

    if (next_cp < cps.size() && cps[next_cp] == step) {
      record(step);
      ++next_cp;
    }
  }
  if (t_final == 0) record(0);

  tree.t = t_final;
  tree.partition = idx.total();
  return {std::move(tree), std::move(traj)};
}

std::pair<TreeState, GrowthTrajectory> grow_continuous(const WeightDistribution& dist,
                                                       const FitnessModel& fm,
                                                       std::int64_t t_final_events,
                                                       std::uint64_t seed,
                                                       const GrowOptions& opts) {
  check_capacity(t_final_events, fm.ell(), opts);
  SplitMix64 rng(seed);
  const int ell = fm.ell();

  TreeState tree;
  tree.ell = ell;
  FitnessCache cache(fm);

  struct Event {
    double time;
    std::uint32_t vertex;
    std::uint32_t epoch;
    bool operator>(const Event& o) const { return time > o.time; }
  };
  std::priority_queue<Event, std::vector<Event>, std::greater<Event>> queue;
  std::vector<std::uint32_t> epoch;

  double z = 0.0;  // sum of live clock rates
  auto add_vertex = [&](std::uint32_t parent, double now) {
    const double w = dist.sample(rng);
    const auto v = static_cast<std::uint32_t>(tree.weights.size());
    tree.parents.push_back(parent);
    tree.out_degree.push_back(0);
    tree.weights.push_back(w);
    cache.push_vertex(w);
    epoch.push_back(0);
    const double rate = fm.eval(0, w);
    z += rate;
    if (rate > 0.0) queue.push({now + rng.next_exponential(rate), v, 0});
  };

  add_vertex(0, 0.0);
  std::int64_t leaves = 1;
  WindowTracker windows(opts.profile_windows);

  GrowthTrajectory traj;
  const auto cps = checkpoint_times(t_final_events);
  std::size_t next_cp = 0;

  for (std::int64_t births = 1; births <= t_final_events; ++births) {
    Event ev{};
    while (true) {
      if (queue.empty()) throw AllZero("no live clocks left in the population");
      ev = queue.top();
      queue.pop();
      if (ev.epoch == epoch[ev.vertex]) break;  // stale clocks are skipped
    }
    const std::uint32_t j = ev.vertex;
    const double now = ev.time;
    tree.clock_time = now;
    const std::int64_t k_new = tree.out_degree[j] / ell + 1;
    if (tree.out_degree[j] == 0) --leaves;
    tree.out_degree[j] += ell;
    windows.on_attach(tree.weights[j], ell);

    z -= cache.eval(j, k_new - 1);
    for (int c = 0; c < ell; ++c) add_vertex(j, now);
    leaves += ell;

    // Memorylessness: regenerate j's clock at the post-birth rate.
    const double rate = cache.eval(j, k_new);
    z += rate;
    ++epoch[j];
    if (rate > 0.0) queue.push({now + rng.next_exponential(rate), j, epoch[j]});

    if (next_cp < cps.size() && cps[next_cp] == births) {
      Checkpoint cp;
      cp.t = births;
      cp.z_over_t = z / static_cast<double>(births);
      cp.leaf_count = static_cast<double>(leaves);
      cp.window_mass = windows.normalized(births, ell);
      traj.checkpoints.push_back(std::move(cp));
      ++next_cp;
    }
  }

  if (t_final_events == 0) {
    Checkpoint cp;
    cp.t = 0;
    cp.z_over_t = z;
    cp.leaf_count = static_cast<double>(leaves);
    cp.window_mass = windows.normalized(0, ell);
    traj.checkpoints.push_back(std::move(cp));
  }

  tree.t = t_final_events;
  tree.partition = z;
  return {std::move(tree), std::move(traj)};
}

void write_edge_list(const TreeState& tree, const std::string& path,
                     const std::string& header_comment) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << "# " << header_comment << "\n";
  for (std::size_t v = 1; v < tree.parents.size(); ++v)
    out << v << " " << tree.parents[v] << "\n";
}

}  // namespace rif
