#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "switchcontrol/pde.hpp"
#include "switchcontrol/scalar_penalties.hpp"
#include "switchcontrol/switching.hpp"

namespace swc {

/// Node-wise penalty as seen by the solver: the regularized subdifferential
/// h_gamma, one of its Newton derivatives, and an integer active-set code.
class PointwisePenalty {
 public:
  virtual ~PointwisePenalty() = default;
  virtual std::string kind() const = 0;
  virtual double beta() const = 0;
  virtual Point2 h(Point2 q, double gamma) const = 0;
  virtual Deriv2x2 dh(Point2 q, double gamma) const = 0;
  virtual int region(Point2 q, double gamma) const = 0;
  virtual std::string region_name(int code) const = 0;
  virtual double value(Point2 v) const = 0;
  /// Arc of the node, only defined for the switching cost.
  virtual std::optional<Arc> arc(Point2 /*q*/, double /*gamma*/) const { return std::nullopt; }
};

class SwitchingPenalty final : public PointwisePenalty {
 public:
  explicit SwitchingPenalty(SwitchingParams p) : p_(p) {}
  std::string kind() const override { return "switching"; }
  double beta() const override { return p_.beta(); }
  Point2 h(Point2 q, double gamma) const override { return my_grad(q, p_, gamma); }
  Deriv2x2 dh(Point2 q, double gamma) const override { return newton_deriv(q, p_, gamma); }
  int region(Point2 q, double gamma) const override {
    return static_cast<int>(classify_gamma(q, p_, gamma));
  }
  std::string region_name(int code) const override {
    return std::string(to_string(static_cast<RegionGamma>(code)));
  }
  double value(Point2 v) const override { return g_value(v, p_); }
  /// Arc of the resolvent point prox(q), at which h(q) is an exact subgradient.
  std::optional<Arc> arc(Point2 q, double gamma) const override {
    return arc_label(prox_conj(q, p_, gamma), p_);
  }
  const SwitchingParams& params() const { return p_; }

 private:
  SwitchingParams p_;
};

/// Sparse cost applied to each component separately.
class SparsePenalty final : public PointwisePenalty {
 public:
  explicit SparsePenalty(SparseParams p) : p_(p) {}
  std::string kind() const override { return "sparse"; }
  double beta() const override { return p_.beta(); }
  Point2 h(Point2 q, double gamma) const override;
  Deriv2x2 dh(Point2 q, double gamma) const override;
  int region(Point2 q, double gamma) const override;
  std::string region_name(int code) const override;
  double value(Point2 v) const override;

 private:
  SparseParams p_;
};

/// Multi-bang cost applied to each component separately.
class MultibangPenalty final : public PointwisePenalty {
 public:
  explicit MultibangPenalty(MultibangParams p) : p_(std::move(p)) {}
  std::string kind() const override { return "multibang"; }
  double beta() const override { return p_.beta(); }
  Point2 h(Point2 q, double gamma) const override;
  Deriv2x2 dh(Point2 q, double gamma) const override;
  int region(Point2 q, double gamma) const override;
  std::string region_name(int code) const override;
  double value(Point2 v) const override;

 private:
  int scalar_code(double q, double gamma) const;
  MultibangParams p_;
};

struct SolverConfig {
  double gamma0 = 1.0;
  double gamma_factor = 0.1;
  double gamma_min = 1e-16;
  int newton_max_iter = 30;
  double residual_tol = 1e-6;
  int backtrack_max_halvings = 40;
  double backtrack_min_step = 1e-12;

  void validate() const;
};

struct NewtonState {
  Vec y;
  Vec p;  // stacked dual field
  double gamma = 1.0;

  static NewtonState zeros(const ControlProblem& prob, double gamma);
};

struct Residual {
  Vec r1;  // state part
  Vec r2;  // control part
  double norm = 0.0;  // sqrt(|r1|_M^2 + |r2|_R^2)
  double max_norm = 0.0;
};

struct NewtonStep {
  Vec dy;
  Vec dp;
  double backward_error = 0.0;
};

class LinearSolveFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class StageStatus { Converged, BacktrackStall, MaxIterations, LinearSolveFailure };
std::string_view to_string(StageStatus s);

struct StageRecord {
  double gamma = 0.0;
  int iterations = 0;
  std::vector<double> residuals;      // initial value, then one per accepted step
  std::vector<double> residuals_max;  // same, max-norm
  std::vector<double> steps;          // accepted step sizes
  StageStatus status = StageStatus::MaxIterations;
  std::map<std::string, int> active_counts;
  /// After a one-step stage: residual of the same iterate at the next gamma.
  std::optional<double> next_gamma_residual;
};

struct ArcMeasures {
  // R-weighted measures
  double switching = 0.0;
  double free = 0.0;           // I, including its boundary part
  double free_boundary = 0.0;  // dI
  double singular = 0.0;       // S
  // node counts
  int n_switching = 0;
  int n_free = 0;
  int n_free_boundary = 0;
  int n_singular = 0;
};

enum class Termination { SingleStep, GammaMin, Aborted };
std::string_view to_string(Termination t);

struct ContinuationReport {
  std::string problem;
  std::string penalty;
  std::vector<StageRecord> stages;
  Termination termination = Termination::GammaMin;
  bool has_solution = false;  // false if no stage ever converged
  double gamma_final = 0.0;
  ControlField control;
  DualField dual;
  Vec state;
  std::vector<std::string> node_regions;
  std::vector<std::string> node_arcs;  // empty for non-switching penalties
  std::map<std::string, int> active_counts;
  std::optional<ArcMeasures> arcs;
  std::optional<double> gap_bound;
  double objective = 0.0;
  double final_residual = 0.0;
};

/// (1/2)|S u - z|_M^2 + sum_i w_i g(u_i).
double eval_objective(const ControlProblem& prob, const ControlField& u, const PointwisePenalty& pen);

/// Semismooth Newton solver with backtracking and gamma continuation. The
/// dense normal matrix S*S is formed once at construction.
class SsnSolver {
 public:
  SsnSolver(const ControlProblem& prob, const PointwisePenalty& pen, SolverConfig cfg);

  Vec control_of(const Vec& p, double gamma) const;
  Residual residual(const NewtonState& s) const;
  NewtonStep newton_step(const NewtonState& s) const;
  std::vector<int> active_codes(const Vec& p, double gamma) const;
  std::map<std::string, int> active_sets(const Vec& p, double gamma) const;
  /// Runs Newton at s.gamma; `s` ends at the last accepted iterate.
  StageRecord solve_fixed_gamma(NewtonState& s) const;
  ContinuationReport continuation() const;

  const Eigen::MatrixXd& normal_matrix() const { return k_; }
  const SolverConfig& config() const { return cfg_; }

 private:
  const ControlProblem& prob_;
  const PointwisePenalty& pen_;
  SolverConfig cfg_;
  Eigen::MatrixXd k_;
};

}  // namespace swc
