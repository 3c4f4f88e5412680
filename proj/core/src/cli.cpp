#include "rif/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <json.hpp>

#include "rif/engine.hpp"
#include "rif/errors.hpp"
#include "rif/limits.hpp"
#include "rif/malthus.hpp"
#include "rif/replicas.hpp"
#include "rif/rng.hpp"
#include "rif/stats.hpp"

namespace rif {

namespace {

using nlohmann::json;

struct Effective {
  std::uint64_t seed = 0;
  bool has_seed = false;
  int threads = 1;
  std::filesystem::path out;
};

Effective resolve(const RunConfig& cfg, const CliOverrides& ov) {
  Effective e;
  if (ov.seed) {
    e.seed = *ov.seed;
    e.has_seed = true;
  } else if (cfg.seed) {
    e.seed = *cfg.seed;
    e.has_seed = true;
  }
  int threads = cfg.threads;
  if (const char* env = std::getenv("RIF_THREADS"); env && *env && threads == 0)
    threads = std::atoi(env);
  if (ov.threads) threads = *ov.threads;
  if (threads <= 0)
    threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  e.threads = threads;
  e.out = ov.out_dir ? std::filesystem::path(*ov.out_dir)
                     : std::filesystem::path(cfg.output_dir);
  std::filesystem::create_directories(e.out);
  return e;
}

std::string provenance_line(const RunConfig& cfg, const Effective& e) {
  std::string s = std::string("rif ") + kToolVersion +
                  " config=" + hash_hex(cfg.config_hash);
  s += e.has_seed ? " seed=" + std::to_string(e.seed) : " seed=-";
  return s;
}

json provenance_json(const RunConfig& cfg, const Effective& e) {
  json p = {{"tool", "rif"},
            {"version", kToolVersion},
            {"config_hash", hash_hex(cfg.config_hash)}};
  if (e.has_seed) p["seed"] = e.seed;
  return p;
}

std::ofstream open_csv(const std::filesystem::path& path, const RunConfig& cfg,
                       const Effective& e) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.precision(17);
  out << "# " << provenance_line(cfg, e) << "\n";
  return out;
}

void write_json_report(const std::filesystem::path& path, const json& body) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << body.dump(2) << "\n";
}

json regime_to_json(const RegimeReport& rep) {
  json j;
  j["regime"] = regime_name(rep.regime);
  if (rep.alpha) j["alpha"] = *rep.alpha;
  j["lambda_tilde"] = std::isfinite(rep.lambda_tilde)
                          ? json(rep.lambda_tilde)
                          : json("inf");
  if (rep.m_star) j["m_star"] = *rep.m_star;
  if (rep.z_limit)
    j["z_limit"] = std::isfinite(*rep.z_limit) ? json(*rep.z_limit) : json("inf");
  return j;
}

SolveOptions solve_options(const RunConfig& cfg) {
  SolveOptions opts;
  opts.tol = cfg.tol.solve_tol;
  return opts;
}

GrowOptions grow_options(const RunConfig& cfg) {
  GrowOptions g;
  const double wstar = cfg.weight.support_sup();
  if (std::isfinite(wstar))
    for (double eps : cfg.epsilons) g.profile_windows.push_back(wstar - eps);
  return g;
}

EmpiricalSummary simulate_merged(const RunConfig& cfg, const Effective& e) {
  if (!e.has_seed) throw BadConfig("this experiment needs a seed");
  ReplicaOptions ro;
  ro.engine = cfg.engine == "continuous" ? EngineKind::Continuous
                                         : EngineKind::Discrete;
  ro.threads = e.threads;
  ro.grow = grow_options(cfg);
  return run_replicas(cfg.weight, cfg.fitness, cfg.t_final, cfg.replicas, e.seed,
                      cfg.bins, cfg.k_max, ro);
}

void write_trajectory_csv(const std::filesystem::path& path, const RunConfig& cfg,
                          const Effective& e, const EmpiricalSummary& emp) {
  auto out = open_csv(path, cfg, e);
  out << "t,z_over_t,leaf_count";
  for (double lo : emp.window_lows) out << ",mass_from_" << lo;
  out << "\n";
  for (const auto& cp : emp.checkpoints) {
    out << cp.t << "," << cp.z_over_t << "," << cp.leaf_count;
    for (double m : cp.window_mass) out << "," << m;
    out << "\n";
  }
}

void write_degree_hist_csv(const std::filesystem::path& path, const RunConfig& cfg,
                           const Effective& e, const EmpiricalSummary& emp) {
  auto out = open_csv(path, cfg, e);
  out << "k,bin_lo,bin_hi,count,empirical\n";
  const double denom = static_cast<double>(emp.replicas) * emp.ell *
                       static_cast<double>(std::max<std::int64_t>(emp.t, 1));
  for (std::int64_t k = 0; k <= emp.k_max; ++k) {
    bool any = false;
    for (std::size_t j = 0; j < emp.bins.cell_count(); ++j)
      any = any || emp.counts[static_cast<std::size_t>(k)][j] > 0;
    if (!any && k > 1) continue;
    for (std::size_t j = 0; j < emp.bins.cell_count(); ++j) {
      const auto [lo, hi] = emp.bins.cell_bounds(j);
      const double c = emp.counts[static_cast<std::size_t>(k)][j];
      out << k << "," << lo << "," << hi << "," << c << "," << c / denom << "\n";
    }
  }
}

struct Check {
  std::string name;
  double value;
  double threshold;
  bool pass;
};

json checks_to_json(const std::vector<Check>& checks) {
  json arr = json::array();
  for (const auto& c : checks)
    arr.push_back({{"name", c.name},
                   {"value", c.value},
                   {"threshold", c.threshold},
                   {"pass", c.pass}});
  return arr;
}

}  // namespace

int cmd_solve(RunConfig cfg, const CliOverrides& ov) {
  const Effective e = resolve(cfg, ov);
  try {
    const RegimeReport rep = solve_malthusian(cfg.weight, cfg.fitness,
                                              solve_options(cfg));
    json j = regime_to_json(rep);
    j["provenance"] = provenance_json(cfg, e);
    std::cout << j.dump(2) << "\n";
    write_json_report(e.out / "report.json", j);
    return kExitOk;
  } catch (const InconclusiveRegime& ex) {
    json j = {{"regime", "Inconclusive"}, {"detail", ex.what()},
              {"provenance", provenance_json(cfg, e)}};
    std::cout << j.dump(2) << "\n";
    write_json_report(e.out / "report.json", j);
    return kExitFail;
  }
}

int cmd_limits(RunConfig cfg, const CliOverrides& ov) {
  const Effective e = resolve(cfg, ov);
  const SolveOptions opts = solve_options(cfg);
  const RegimeReport rep = solve_malthusian(cfg.weight, cfg.fitness, opts);

  json j;
  j["provenance"] = provenance_json(cfg, e);
  j["solve"] = regime_to_json(rep);

  if (rep.regime == Regime::Degenerate) {
    const auto leaf = degenerate_law(cfg.weight, cfg.bins);
    auto out = open_csv(e.out / "leaf_law.csv", cfg, e);
    out << "bin_lo,bin_hi,mu\n";
    for (std::size_t i = 0; i < leaf.size(); ++i) {
      const auto [lo, hi] = cfg.bins.cell_bounds(i);
      out << lo << "," << hi << "," << leaf[i] << "\n";
    }
    j["leaf_law"] = leaf;
    write_json_report(e.out / "report.json", j);
    std::cout << j.dump(2) << "\n";
    return kExitOk;
  }

  const DegreeLawTable law =
      degree_law(cfg.weight, cfg.fitness, rep, cfg.bins, cfg.k_max, opts);
  const EdgeLawMeasure edges = edge_law(cfg.weight, cfg.fitness, rep, cfg.bins, opts);

  {
    auto out = open_csv(e.out / "degree_law.csv", cfg, e);
    out << "k,bin_lo,bin_hi,p\n";
    for (std::int64_t k = 0; k <= law.k_max; ++k)
      for (std::size_t i = 0; i < law.bins.cell_count(); ++i) {
        const auto [lo, hi] = law.bins.cell_bounds(i);
        out << k << "," << lo << "," << hi << ","
            << law.p[static_cast<std::size_t>(k)][i] << "\n";
      }
  }
  {
    auto out = open_csv(e.out / "edge_law.csv", cfg, e);
    out << "part,bin_lo,bin_hi,mass\n";
    for (std::size_t i = 0; i < edges.bins.cell_count(); ++i) {
      const auto [lo, hi] = edges.bins.cell_bounds(i);
      out << "continuous," << lo << "," << hi << "," << edges.continuous[i] << "\n";
    }
    const double wstar = cfg.weight.support_sup();
    out << "atom," << wstar << "," << wstar << "," << edges.atom_at_wstar << "\n";
  }

  j["degree_law"] = {{"k_max", law.k_max},
                     {"regime_constant", law.regime_constant},
                     {"total_mass", law.total_mass()},
                     {"tail_mass", law.tail_mass},
                     {"p", law.p}};
  j["edge_law"] = {{"continuous", edges.continuous},
                   {"atom_at_wstar", edges.atom_at_wstar},
                   {"total", edges.total()}};
  if (cfg.fitness.kind() == FitnessKind::Gpaf) {
    std::vector<double> expo;
    for (std::size_t i = 0; i < cfg.bins.cell_count(); ++i) {
      const auto [lo, hi] = cfg.bins.cell_bounds(i);
      const double w = std::isfinite(hi) ? 0.5 * (lo + hi) : lo;
      const double gw = cfg.fitness.g().eval(w);
      expo.push_back(gw > 0.0 ? power_law_exponent(cfg.fitness, rep, w) : 0.0);
    }
    j["power_law_exponent_at_bin_mid"] = expo;
  }
  write_json_report(e.out / "report.json", j);
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_simulate(RunConfig cfg, const CliOverrides& ov) {
  const Effective e = resolve(cfg, ov);
  const EmpiricalSummary emp = simulate_merged(cfg, e);

  write_trajectory_csv(e.out / "trajectory.csv", cfg, e, emp);
  write_degree_hist_csv(e.out / "degree_hist.csv", cfg, e, emp);

  json j;
  j["provenance"] = provenance_json(cfg, e);
  j["t"] = emp.t;
  j["replicas"] = emp.replicas;
  j["vertex_total"] = emp.vertex_total();
  j["edge_total"] = emp.edge_total();
  j["final_z_over_t"] =
      emp.checkpoints.empty() ? 0.0 : emp.checkpoints.back().z_over_t;
  write_json_report(e.out / "report.json", j);
  std::cout << j.dump(2) << "\n";

  if (ov.dump_tree) {
    auto [tree, traj] = grow_discrete(cfg.weight, cfg.fitness, cfg.t_final,
                                      derive_seed(e.seed, 0), grow_options(cfg));
    write_edge_list(tree, (e.out / "edges.txt").string(),
                    provenance_line(cfg, e) + " replica=0");
  }
  return kExitOk;
}

int cmd_compare(RunConfig cfg, const CliOverrides& ov) {
  const Effective e = resolve(cfg, ov);
  const SolveOptions opts = solve_options(cfg);
  RegimeReport rep = solve_malthusian(cfg.weight, cfg.fitness, opts);

  // Negative-control knob: perturb the law constant (and the Z prediction).
  if (cfg.tol.alpha_scale != 1.0 && rep.regime == Regime::C1) {
    rep.alpha = *rep.alpha * cfg.tol.alpha_scale;
    rep.z_limit = *rep.alpha;
  }

  const EmpiricalSummary emp = simulate_merged(cfg, e);
  write_trajectory_csv(e.out / "trajectory.csv", cfg, e, emp);

  std::vector<Check> checks;
  json j;
  j["provenance"] = provenance_json(cfg, e);
  j["solve"] = regime_to_json(rep);

  if (rep.regime == Regime::Degenerate) {
    const auto mu = degenerate_law(cfg.weight, cfg.bins);
    const auto leaf = leaf_fraction(emp);
    double worst = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i)
      worst = std::max(worst, std::abs(leaf[i] - mu[i]));
    const double leaf_tol = cfg.tol.leaf_abs >= 0 ? cfg.tol.leaf_abs : 0.02;
    checks.push_back({"leaf_fraction_max_abs", worst, leaf_tol, worst <= leaf_tol});

    auto out = open_csv(e.out / "degree_compare.csv", cfg, e);
    out << "k,bin_lo,bin_hi,empirical,theoretical,residual\n";
    for (std::size_t i = 0; i < mu.size(); ++i) {
      const auto [lo, hi] = cfg.bins.cell_bounds(i);
      out << 0 << "," << lo << "," << hi << "," << leaf[i] << "," << mu[i] << ","
          << leaf[i] - mu[i] << "\n";
    }
  } else {
    const DegreeLawTable law =
        degree_law(cfg.weight, cfg.fitness, rep, cfg.bins, cfg.k_max, opts);
    const DegreeComparison cmp = compare_degree(emp, law, cfg.tol.compare_k);
    checks.push_back({"degree_max_abs", cmp.max_abs, cfg.tol.max_abs,
                      cmp.max_abs <= cfg.tol.max_abs});
    if (cfg.tol.tv >= 0.0)
      checks.push_back({"degree_tv", cmp.tv, cfg.tol.tv, cmp.tv <= cfg.tol.tv});
    j["degree"] = {{"max_abs", cmp.max_abs},
                   {"tv", cmp.tv},
                   {"max_std_residual", cmp.max_std_residual}};

    auto out = open_csv(e.out / "degree_compare.csv", cfg, e);
    out << "k,bin_lo,bin_hi,empirical,theoretical,residual\n";
    for (const auto& cell : cmp.cells) {
      const auto [lo, hi] = cfg.bins.cell_bounds(cell.cell);
      out << cell.k << "," << lo << "," << hi << "," << cell.empirical << ","
          << cell.theoretical << "," << cell.std_residual << "\n";
    }

    if (cfg.tol.z_rel_err >= 0.0 && rep.z_limit && std::isfinite(*rep.z_limit)) {
      const PartitionDiagnostic pd = partition_diagnostic(emp, *rep.z_limit);
      checks.push_back({"z_rel_err", pd.rel_err, cfg.tol.z_rel_err,
                        pd.rel_err <= cfg.tol.z_rel_err});
      j["partition"] = {{"final", pd.final_value},
                        {"rel_err", pd.rel_err},
                        {"trend", pd.trend}};
    }
  }

  if (!cfg.epsilons.empty() && std::isfinite(cfg.weight.support_sup())) {
    const auto prof =
        condensation_profile(emp, cfg.weight.support_sup(), cfg.epsilons);
    auto out = open_csv(e.out / "edge_profile.csv", cfg, e);
    out << "epsilon,mass\n";
    for (const auto& [eps, mass] : prof) out << eps << "," << mass << "\n";
    json jp = json::array();
    for (const auto& [eps, mass] : prof) jp.push_back({{"epsilon", eps}, {"mass", mass}});
    j["profile"] = jp;

    if (cfg.tol.profile_min >= 0.0) {
      const double mass0 = prof.front().second;
      checks.push_back({"profile_mass", mass0, cfg.tol.profile_min,
                        mass0 >= cfg.tol.profile_min});
      if (cfg.tol.profile_trend) {
        const std::size_t n = emp.checkpoints.size();
        const std::size_t from = n > 5 ? n - 5 : 0;
        std::vector<double> ts, ms;
        for (std::size_t i = from; i < n; ++i) {
          ts.push_back(static_cast<double>(emp.checkpoints[i].t));
          ms.push_back(emp.checkpoints[i].window_mass.empty()
                           ? 0.0
                           : emp.checkpoints[i].window_mass[0]);
        }
        const double trend = spearman(ts, ms);
        checks.push_back({"profile_trend", trend, 0.0, trend > 0.0});
      }
    }
  }

  bool pass = true;
  for (const auto& c : checks) pass = pass && c.pass;
  j["checks"] = checks_to_json(checks);
  j["pass"] = pass;
  write_json_report(e.out / "report.json", j);
  std::cout << j.dump(2) << "\n";
  return pass ? kExitOk : kExitFail;
}

int cmd_phase(RunConfig cfg, const CliOverrides& ov) {
  const Effective e = resolve(cfg, ov);
  if (cfg.fitness.kind() != FitnessKind::Gpaf)
    throw NotGpaf("phase sweeps scale h of a GPAF model");
  if (cfg.phase_c.empty()) throw BadConfig("phase experiment needs phase.c_values");
  const SolveOptions opts = solve_options(cfg);

  auto out = open_csv(e.out / "phase.csv", cfg, e);
  out << "c,regime,m_star,atom,alpha\n";
  json rows = json::array();
  for (double c : cfg.phase_c) {
    const FitnessModel fm_c =
        cfg.fitness.with_h(Expr::scaled(c, cfg.fitness.h()));
    const RegimeReport rep = solve_malthusian(cfg.weight, fm_c, opts);
    double atom = 0.0;
    if (rep.regime == Regime::Condensation || rep.regime == Regime::Boundary)
      atom = std::max(0.0, 1.0 - *rep.m_star);
    out << c << "," << regime_name(rep.regime) << ","
        << (rep.m_star ? *rep.m_star : std::nan("")) << "," << atom << ","
        << (rep.alpha ? *rep.alpha : std::nan("")) << "\n";
    json row = regime_to_json(rep);
    row["c"] = c;
    row["atom"] = atom;
    rows.push_back(row);
  }
  json j;
  j["provenance"] = provenance_json(cfg, e);
  j["phase"] = rows;
  write_json_report(e.out / "report.json", j);
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int run_cli(const std::string& subcommand, const std::string& config_path,
            const CliOverrides& ov) {
  try {
    RunConfig cfg = load_config(config_path);
    if (!cfg.experiment.empty() && cfg.experiment != subcommand)
      throw BadConfig("config experiment '" + cfg.experiment +
                      "' does not match subcommand '" + subcommand + "'");
    if (subcommand == "solve") return cmd_solve(std::move(cfg), ov);
    if (subcommand == "limits") return cmd_limits(std::move(cfg), ov);
    if (subcommand == "simulate") return cmd_simulate(std::move(cfg), ov);
    if (subcommand == "compare") return cmd_compare(std::move(cfg), ov);
    if (subcommand == "phase") return cmd_phase(std::move(cfg), ov);
    std::cerr << "unknown subcommand: " << subcommand << "\n";
    return kExitUsage;
  } catch (const BadConfig& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const InconclusiveRegime& ex) {
    std::cerr << "inconclusive: " << ex.what() << "\n";
    return kExitFail;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace rif
