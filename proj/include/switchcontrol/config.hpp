#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "switchcontrol/ssn.hpp"

namespace swc {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat key/value run configuration. Defaults reproduce the elliptic example
/// with alpha = beta = 1e-3.
struct RunConfig {
  std::string problem = "elliptic2d";  // or parabolic1d
  double alpha = 1e-3;
  double beta = 1e-3;
  std::string penalty = "switching";  // sparse, multibang
  std::vector<double> levels;         // multibang only
  int nx = 128;
  int nt = 512;
  SolverConfig solver;
  std::string out = "out";
  std::uint64_t seed = 20190101;
  bool zero_target = false;
  std::vector<double> sweep_betas;
  // prox-table grid: square [table_min, table_max]^2 with table_points per side
  double table_min = -5.0;
  double table_max = 5.0;
  int table_points = 101;
  double table_gamma = 1.0;

  void validate() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

std::unique_ptr<PointwisePenalty> make_penalty(const RunConfig& cfg);
std::unique_ptr<PointwisePenalty> make_penalty(const RunConfig& cfg, double beta);

}  // namespace swc
