#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rif/cli.hpp"
#include "rif/config.hpp"
#include "rif/errors.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string port_compare_config(double alpha_scale, std::int64_t t_final = 20000,
                                int replicas = 4) {
  std::ostringstream os;
  os << R"({
  "version": 1,
  "model": {
    "weight": {"kind": "point_mass", "value": 1.0},
    "fitness": {"kind": "gpaf", "g": {"expr": "const", "value": 1.0},
                 "h": {"expr": "const", "value": 1.0}, "ell": 1}
  },
  "experiment": "compare",
  "t_final": )" << t_final
     << R"(, "replicas": )" << replicas << R"(, "seed": 321, "threads": 2,
  "bins": {"intervals": [[0, 2]]},
  "k_max": 128,
  "tolerances": {"max_abs": 0.02, "compare_k": 5, "z_rel_err": 0.05,
                  "alpha_scale": )"
     << alpha_scale << R"(}
})";
  return os.str();
}

fs::path write_temp(const std::string& name, const std::string& text) {
  const fs::path dir = fs::temp_directory_path() / "rif_cli_tests";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream out(p);
  out << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("config parsing happy path") {
  auto cfg = rif::parse_config(port_compare_config(1.0));
  CHECK(cfg.t_final == 20000);
  CHECK(cfg.replicas == 4);
  CHECK(cfg.seed.has_value());
  CHECK(cfg.tol.compare_k == 5);
  CHECK(cfg.fitness.kind() == rif::FitnessKind::Gpaf);
  CHECK(cfg.bins.cell_count() == 1);
  CHECK(cfg.config_hash != 0);
}

TEST_CASE("config rejections") {
  // Unknown key.
  CHECK_THROWS_AS(rif::parse_config(R"({"version":1,"bogus":2,"model":{
    "weight":{"kind":"point_mass","value":1},
    "fitness":{"kind":"constant","g":{"expr":"id"}}}})"),
                  rif::BadConfig);
  // Missing seed for a stochastic experiment.
  CHECK_THROWS_AS(rif::parse_config(R"({"version":1,"experiment":"simulate",
    "t_final":10,"model":{
    "weight":{"kind":"point_mass","value":1},
    "fitness":{"kind":"constant","g":{"expr":"id"}}}})"),
                  rif::BadConfig);
  // Bad version.
  CHECK_THROWS_AS(rif::parse_config(R"({"version":7,"model":{
    "weight":{"kind":"point_mass","value":1},
    "fitness":{"kind":"constant","g":{"expr":"id"}}}})"),
                  rif::BadConfig);
  // Invalid model (fitness vanishing at degree 0 on the whole support).
  CHECK_THROWS_AS(rif::parse_config(R"({"version":1,"model":{
    "weight":{"kind":"uniform","a":0,"b":1},
    "fitness":{"kind":"gpaf","g":{"expr":"id"},"h":{"expr":"const","value":0}}}})"),
                  rif::ModelViolation);
}

TEST_CASE("solve command writes a conclusive report") {
  const auto cfgp = write_temp("solve.json", R"({
    "version": 1,
    "model": {
      "weight": {"kind": "polynomial_density", "coeffs": [2, -2], "a": 0, "b": 1},
      "fitness": {"kind": "gpaf", "g": {"expr": "id"},
                   "h": {"expr": "const", "value": 0.25}, "ell": 1}
    },
    "bins": {"intervals": [[0, 1]]}
  })");
  const fs::path out = fs::temp_directory_path() / "rif_cli_tests" / "solve_out";
  rif::CliOverrides ov;
  ov.out_dir = out.string();
  CHECK(rif::run_cli("solve", cfgp.string(), ov) == rif::kExitOk);
  const json rep = json::parse(slurp(out / "report.json"));
  CHECK(rep.at("regime") == "Condensation");
  CHECK(std::abs(rep.at("m_star").get<double>() - 0.5) < 1e-6);
}

TEST_CASE("compare pipeline passes and its negative control fails") {
  const auto good = write_temp("cmp_good.json", port_compare_config(1.0));
  const auto bad = write_temp("cmp_bad.json", port_compare_config(1.5));
  const fs::path out_good = fs::temp_directory_path() / "rif_cli_tests" / "good";
  const fs::path out_bad = fs::temp_directory_path() / "rif_cli_tests" / "bad";

  rif::CliOverrides ov;
  ov.out_dir = out_good.string();
  CHECK(rif::run_cli("compare", good.string(), ov) == rif::kExitOk);
  ov.out_dir = out_bad.string();
  CHECK(rif::run_cli("compare", bad.string(), ov) == rif::kExitFail);

  const json verdict = json::parse(slurp(out_good / "report.json"));
  CHECK(verdict.at("pass") == true);
  CHECK(verdict.contains("checks"));

  // Provenance header on every CSV.
  const std::string csv = slurp(out_good / "degree_compare.csv");
  CHECK(csv.rfind("# rif", 0) == 0);
  CHECK(csv.find("config=") != std::string::npos);
}

TEST_CASE("reruns are bit-identical") {
  const auto cfgp = write_temp("rerun.json", port_compare_config(1.0, 5000, 2));
  const fs::path o1 = fs::temp_directory_path() / "rif_cli_tests" / "r1";
  const fs::path o2 = fs::temp_directory_path() / "rif_cli_tests" / "r2";
  rif::CliOverrides ov;
  ov.out_dir = o1.string();
  REQUIRE(rif::run_cli("compare", cfgp.string(), ov) == rif::kExitOk);
  ov.out_dir = o2.string();
  REQUIRE(rif::run_cli("compare", cfgp.string(), ov) == rif::kExitOk);
  for (const char* name : {"degree_compare.csv", "trajectory.csv", "report.json"})
    CHECK(slurp(o1 / name) == slurp(o2 / name));
}

TEST_CASE("degenerate solve reports through the CLI") {
  const auto cfgp = write_temp("degen.json", R"({
    "version": 1,
    "model": {
      "weight": {"kind": "uniform", "a": 0, "b": 1},
      "fitness": {"kind": "gpaf", "g": {"expr": "recip", "c": 1},
                   "h": {"expr": "recip", "c": 1}, "ell": 1}
    },
    "bins": {"intervals": [[0, 1]]}
  })");
  const fs::path out = fs::temp_directory_path() / "rif_cli_tests" / "degen_out";
  rif::CliOverrides ov;
  ov.out_dir = out.string();
  CHECK(rif::run_cli("solve", cfgp.string(), ov) == rif::kExitOk);
  const json rep = json::parse(slurp(out / "report.json"));
  CHECK(rep.at("regime") == "Degenerate");
  CHECK(rep.at("lambda_tilde") == "inf");
}

TEST_CASE("runtime failures map to exit code 2") {
  // compare with t_final = 0 cannot form empirical frequencies.
  const auto cfgp = write_temp("broken.json", R"({
    "version": 1,
    "model": {
      "weight": {"kind": "point_mass", "value": 1.0},
      "fitness": {"kind": "gpaf", "g": {"expr": "const", "value": 1.0},
                   "h": {"expr": "const", "value": 1.0}, "ell": 1}
    },
    "experiment": "compare",
    "t_final": 0, "replicas": 1, "seed": 9,
    "bins": {"intervals": [[0, 2]]},
    "k_max": 8
  })");
  rif::CliOverrides ov;
  ov.out_dir = (fs::temp_directory_path() / "rif_cli_tests" / "broken_out").string();
  CHECK(rif::run_cli("compare", cfgp.string(), ov) == rif::kExitRuntime);
}

TEST_CASE("experiment tag must match the subcommand") {
  const auto cfgp = write_temp("mismatch.json", port_compare_config(1.0));
  rif::CliOverrides ov;
  CHECK(rif::run_cli("solve", cfgp.string(), ov) == rif::kExitUsage);
}

TEST_CASE("phase sweep finds the condensation boundary") {
  const auto cfgp = write_temp("phase.json", R"({
    "version": 1,
    "model": {
      "weight": {"kind": "polynomial_density", "coeffs": [2, -2], "a": 0, "b": 1},
      "fitness": {"kind": "gpaf", "g": {"expr": "id"},
                   "h": {"expr": "const", "value": 1.0}, "ell": 1}
    },
    "experiment": "phase",
    "bins": {"intervals": [[0, 1]]},
    "phase": {"c_values": [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0]},
    "tolerances": {"solve_tol": 1e-9}
  })");
  const fs::path out = fs::temp_directory_path() / "rif_cli_tests" / "phase_out";
  rif::CliOverrides ov;
  ov.out_dir = out.string();
  REQUIRE(rif::run_cli("phase", cfgp.string(), ov) == rif::kExitOk);
  const json rep = json::parse(slurp(out / "report.json"));
  const auto& rows = rep.at("phase");
  REQUIRE(rows.size() == 10);
  for (const auto& row : rows) {
    const double c = row.at("c").get<double>();
    const std::string regime = row.at("regime").get<std::string>();
    if (c < 0.5 - 1e-9) {
      CHECK(regime == "Condensation");
      CHECK(std::abs(row.at("atom").get<double>() - (1.0 - 2.0 * c)) < 1e-6);
    } else if (c > 0.5 + 1e-9) {
      CHECK(regime == "C1");
    } else {
      CHECK(regime == "Boundary");
    }
  }
}

TEST_CASE("simulate writes trajectory and can dump the tree") {
  const auto cfgp = write_temp("sim.json", R"({
    "version": 1,
    "model": {
      "weight": {"kind": "uniform", "a": 0, "b": 1},
      "fitness": {"kind": "constant", "g": {"expr": "id"}, "ell": 1}
    },
    "experiment": "simulate",
    "t_final": 2000, "replicas": 2, "seed": 5,
    "bins": {"intervals": [[0, 1]]},
    "k_max": 32
  })");
  const fs::path out = fs::temp_directory_path() / "rif_cli_tests" / "sim_out";
  rif::CliOverrides ov;
  ov.out_dir = out.string();
  ov.dump_tree = true;
  REQUIRE(rif::run_cli("simulate", cfgp.string(), ov) == rif::kExitOk);
  CHECK(fs::exists(out / "trajectory.csv"));
  CHECK(fs::exists(out / "degree_hist.csv"));
  const std::string edges = slurp(out / "edges.txt");
  CHECK(edges.rfind("# rif", 0) == 0);
  CHECK(edges.find("\n1 0\n") != std::string::npos);  // vertex 1 attaches to the root
}
