#include "rif/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "detail_json.hpp"
#include "rif/errors.hpp"

namespace rif {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw BadConfig("unknown key '" + it.key() + "' in " + where);
}

FitnessModel parse_fitness(const json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw BadConfig("fitness spec must be an object with a 'kind' tag");
  const std::string kind = j.at("kind").get<std::string>();
  const int ell = j.contains("ell") ? j.at("ell").get<int>() : 1;

  FitnessModel fm = FitnessModel::constant_in_degree(Expr::constant(1.0), 1);
  if (kind == "gpaf") {
    reject_unknown_keys(j, {"kind", "g", "h", "ell", "envelope"}, "fitness");
    fm = FitnessModel::gpaf(detail::expr_from_json(j.at("g")),
                            detail::expr_from_json(j.at("h")), ell);
  } else if (kind == "cayley") {
    reject_unknown_keys(j, {"kind", "g", "ell", "envelope"}, "fitness");
    fm = FitnessModel::cayley(detail::expr_from_json(j.at("g")), ell);
  } else if (kind == "constant") {
    reject_unknown_keys(j, {"kind", "g", "ell", "envelope"}, "fitness");
    fm = FitnessModel::constant_in_degree(detail::expr_from_json(j.at("g")), ell);
  } else if (kind == "tabular") {
    reject_unknown_keys(j, {"kind", "rows", "extension", "ell", "envelope"}, "fitness");
    std::vector<Expr> rows;
    for (const auto& r : j.at("rows")) rows.push_back(detail::expr_from_json(r));
    TabularExtension ext = TabularExtension::Clamp;
    if (j.contains("extension")) {
      const std::string e = j.at("extension").get<std::string>();
      if (e == "clamp")
        ext = TabularExtension::Clamp;
      else if (e == "zero")
        ext = TabularExtension::Zero;
      else
        throw BadConfig("tabular extension must be 'clamp' or 'zero'");
    }
    fm = FitnessModel::tabular(std::move(rows), ext, ell);
  } else {
    throw BadConfig("unknown fitness kind '" + kind + "'");
  }

  if (j.contains("envelope")) {
    const json& e = j.at("envelope");
    reject_unknown_keys(e, {"C", "phi"}, "fitness.envelope");
    fm.envelope = Envelope{e.at("C").get<double>(),
                           detail::expr_from_json(e.at("phi"))};
  }
  return fm;
}

BinSet parse_bins(const json& j) {
  reject_unknown_keys(j, {"intervals", "atoms"}, "bins");
  BinSet bins;
  if (j.contains("intervals"))
    for (const auto& iv : j.at("intervals")) {
      if (!iv.is_array() || iv.size() != 2)
        throw BadConfig("each bin interval must be a [lo, hi] pair");
      bins.add_interval(iv[0].get<double>(), iv[1].get<double>());
    }
  if (j.contains("atoms"))
    for (const auto& a : j.at("atoms")) bins.add_atom(a.get<double>());
  if (bins.cell_count() == 0) throw BadConfig("bins must have at least one cell");
  return bins;
}

Tolerances parse_tolerances(const json& j) {
  reject_unknown_keys(j,
                      {"max_abs", "tv", "z_rel_err", "profile_min", "profile_trend",
                       "leaf_abs", "compare_k", "solve_tol", "alpha_scale"},
                      "tolerances");
  Tolerances t;
  if (j.contains("max_abs")) t.max_abs = j.at("max_abs").get<double>();
  if (j.contains("tv")) t.tv = j.at("tv").get<double>();
  if (j.contains("z_rel_err")) t.z_rel_err = j.at("z_rel_err").get<double>();
  if (j.contains("profile_min")) t.profile_min = j.at("profile_min").get<double>();
  if (j.contains("profile_trend")) t.profile_trend = j.at("profile_trend").get<bool>();
  if (j.contains("leaf_abs")) t.leaf_abs = j.at("leaf_abs").get<double>();
  if (j.contains("compare_k")) t.compare_k = j.at("compare_k").get<std::int64_t>();
  if (j.contains("solve_tol")) t.solve_tol = j.at("solve_tol").get<double>();
  if (j.contains("alpha_scale")) t.alpha_scale = j.at("alpha_scale").get<double>();
  return t;
}

}  // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    throw BadConfig(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw BadConfig("config root must be an object");
  try {
  reject_unknown_keys(j,
                      {"version", "model", "experiment", "t_final", "replicas", "seed",
                       "threads", "bins", "k_max", "epsilons", "output_dir", "engine",
                       "tolerances", "phase"},
                      "config");

  RunConfig cfg;
  cfg.raw_text = json_text;
  cfg.config_hash = fnv1a64(json_text);

  if (!j.contains("version") || !j.at("version").is_number_integer())
    throw BadConfig("config needs an integer 'version'");
  cfg.version = j.at("version").get<int>();
  if (cfg.version != 1) throw BadConfig("unsupported config version");

  if (!j.contains("model")) throw BadConfig("config needs a 'model' object");
  const json& model = j.at("model");
  reject_unknown_keys(model, {"weight", "fitness"}, "model");
  if (!model.contains("weight") || !model.contains("fitness"))
    throw BadConfig("model needs 'weight' and 'fitness' specs");
  cfg.weight = detail::weight_from_json(model.at("weight"));
  cfg.fitness = parse_fitness(model.at("fitness"));
  cfg.fitness.validate_against(cfg.weight);

  if (j.contains("experiment")) cfg.experiment = j.at("experiment").get<std::string>();
  if (j.contains("t_final")) cfg.t_final = j.at("t_final").get<std::int64_t>();
  if (j.contains("replicas")) cfg.replicas = j.at("replicas").get<std::int64_t>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
  if (j.contains("bins")) cfg.bins = parse_bins(j.at("bins"));
  if (j.contains("k_max")) cfg.k_max = j.at("k_max").get<std::int64_t>();
  if (j.contains("epsilons"))
    for (const auto& e : j.at("epsilons")) cfg.epsilons.push_back(e.get<double>());
  if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("engine")) {
    cfg.engine = j.at("engine").get<std::string>();
    if (cfg.engine != "discrete" && cfg.engine != "continuous")
      throw BadConfig("engine must be 'discrete' or 'continuous'");
  }
  if (j.contains("tolerances")) cfg.tol = parse_tolerances(j.at("tolerances"));
  if (j.contains("phase")) {
    const json& p = j.at("phase");
    reject_unknown_keys(p, {"c_values"}, "phase");
    for (const auto& c : p.at("c_values")) cfg.phase_c.push_back(c.get<double>());
  }

  if (cfg.k_max < 0) throw BadConfig("k_max must be nonnegative");
  if (cfg.t_final < 0) throw BadConfig("t_final must be nonnegative");
  if (cfg.replicas < 1) throw BadConfig("replicas must be >= 1");

  const bool stochastic = cfg.experiment == "simulate" || cfg.experiment == "compare";
  if (stochastic && !cfg.seed)
    throw BadConfig("stochastic experiments need a 'seed'");
  return cfg;
  } catch (const json::exception& e) {
    throw BadConfig(std::string("malformed config: ") + e.what());
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BadConfig("cannot read config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace rif
