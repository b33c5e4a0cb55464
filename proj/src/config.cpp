#include "switchcontrol/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace swc {

namespace {

template <class T>
void read(const YAML::Node& root, const char* key, T& dst) {
  const YAML::Node n = root[key];
  if (!n) return;
  try {
    dst = n.as<T>();
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

}  // namespace

void RunConfig::validate() const {
  if (problem != "elliptic2d" && problem != "parabolic1d") {
    throw ConfigError("problem must be elliptic2d or parabolic1d, got '" + problem + "'");
  }
  if (!(alpha > 0.0) || !(beta > 0.0)) throw ConfigError("alpha and beta must be positive");
  if (penalty != "switching" && penalty != "sparse" && penalty != "multibang") {
    throw ConfigError("penalty must be switching, sparse or multibang, got '" + penalty + "'");
  }
  if (penalty == "multibang") {
    if (levels.size() < 2) throw ConfigError("multibang needs at least two levels");
    for (std::size_t i = 1; i < levels.size(); ++i) {
      if (!(levels[i] > levels[i - 1])) throw ConfigError("levels must be strictly increasing");
    }
  }
  if (nx < 4 || nt < 4) throw ConfigError("nx and nt must be at least 4");
  for (std::size_t i = 0; i < sweep_betas.size(); ++i) {
    if (!(sweep_betas[i] > 0.0)) throw ConfigError("sweep_betas must be positive");
    if (i > 0 && !(sweep_betas[i] > sweep_betas[i - 1])) throw ConfigError("sweep_betas must be increasing");
  }
  if (!(table_min < table_max) || table_points < 2 || !(table_gamma > 0.0)) {
    throw ConfigError("prox table needs table_min < table_max, table_points >= 2, table_gamma > 0");
  }
  try {
    solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

RunConfig parse_config_text(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config is not valid YAML: ") + e.what());
  }
  RunConfig c;
  if (root.IsNull()) {
    c.validate();
    return c;
  }
  if (!root.IsMap()) throw ConfigError("config must be a flat key: value mapping");

  static const std::set<std::string> known{
      "problem", "alpha", "beta", "penalty", "levels", "nx", "nt", "gamma0", "gamma_factor",
      "gamma_min", "newton_max_iter", "residual_tol", "backtrack_max_halvings", "backtrack_min_step",
      "out", "seed", "zero_target", "sweep_betas", "table_min", "table_max", "table_points", "table_gamma"};
  for (const auto& kv : root) {
    const std::string key = kv.first.as<std::string>();
    if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }

  read(root, "problem", c.problem);
  if (c.problem == "parabolic1d") {
    // parabolic defaults from the heat-equation example
    c.alpha = 1e-1;
    c.beta = 1.0;
  }
  read(root, "alpha", c.alpha);
  read(root, "beta", c.beta);
  read(root, "penalty", c.penalty);
  read(root, "levels", c.levels);
  read(root, "nx", c.nx);
  read(root, "nt", c.nt);
  read(root, "gamma0", c.solver.gamma0);
  read(root, "gamma_factor", c.solver.gamma_factor);
  read(root, "gamma_min", c.solver.gamma_min);
  read(root, "newton_max_iter", c.solver.newton_max_iter);
  read(root, "residual_tol", c.solver.residual_tol);
  read(root, "backtrack_max_halvings", c.solver.backtrack_max_halvings);
  read(root, "backtrack_min_step", c.solver.backtrack_min_step);
  read(root, "out", c.out);
  read(root, "seed", c.seed);
  read(root, "zero_target", c.zero_target);
  read(root, "sweep_betas", c.sweep_betas);
  read(root, "table_min", c.table_min);
  read(root, "table_max", c.table_max);
  read(root, "table_points", c.table_points);
  read(root, "table_gamma", c.table_gamma);
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::unique_ptr<PointwisePenalty> make_penalty(const RunConfig& cfg) { return make_penalty(cfg, cfg.beta); }

std::unique_ptr<PointwisePenalty> make_penalty(const RunConfig& cfg, double beta) {
  if (cfg.penalty == "switching") return std::make_unique<SwitchingPenalty>(SwitchingParams(cfg.alpha, beta));
  if (cfg.penalty == "sparse") return std::make_unique<SparsePenalty>(SparseParams(cfg.alpha, beta));
  return std::make_unique<MultibangPenalty>(MultibangParams(cfg.alpha, beta, cfg.levels));
}

}  // namespace swc
