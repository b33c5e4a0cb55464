#pragma once

#include <stdexcept>
#include <vector>

#include "switchcontrol/switching.hpp"

namespace swc {

/// g(v) = alpha/2 v^2 + beta |v|_0
class SparseParams {
 public:
  SparseParams(double alpha, double beta);
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double threshold() const { return threshold_; }

 private:
  double alpha_;
  double beta_;
  double threshold_;
};

/// g(v) = alpha/2 v^2 + beta prod_i |v - u_i|_0 + indicator of [u_1, u_d]
class MultibangParams {
 public:
  MultibangParams(double alpha, double beta, std::vector<double> levels);
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double threshold() const { return threshold_; }
  const std::vector<double>& levels() const { return levels_; }
  double lower() const { return levels_.front(); }
  double upper() const { return levels_.back(); }

 private:
  double alpha_;
  double beta_;
  double threshold_;
  std::vector<double> levels_;
};

class NoFeasibleCandidate : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// --- sparse ---------------------------------------------------------------

double sparse_value(double v, const SparseParams& p);
double sparse_conj(double q, const SparseParams& p);
Interval sparse_subdiff(double q, const SparseParams& p);
/// 0 below the threshold, 1 in the soft-threshold band, 2 beyond it.
int sparse_region(double q, const SparseParams& p, double gamma);
double sparse_prox(double v, const SparseParams& p, double gamma);
double sparse_my(double q, const SparseParams& p, double gamma);
double sparse_newton_deriv(double q, const SparseParams& p, double gamma);

// --- multi-bang -----------------------------------------------------------

/// Which case of the resolvent produced a multi-bang prox value.
struct MultibangCase {
  enum class Kind { Level, Continuum, ThresholdBand, Jump };
  Kind kind = Kind::Level;
  int index = 0;  // level index for Level/ThresholdBand, lower level for Jump
  int side = 0;   // +1 / -1 for ThresholdBand

  /// Dense integer code, used to compare active sets between iterates.
  int code(int num_levels) const;
  friend bool operator==(const MultibangCase&, const MultibangCase&) = default;
};

struct MultibangProx {
  double w;
  MultibangCase which;
};

double mb_value(double v, const MultibangParams& p);
double mb_conj(double q, const MultibangParams& p);
Interval mb_subdiff(double q, const MultibangParams& p);
MultibangProx mb_prox_case(double v, const MultibangParams& p, double gamma);
double mb_prox(double v, const MultibangParams& p, double gamma);
double mb_my(double q, const MultibangParams& p, double gamma);
double mb_newton_deriv(double q, const MultibangParams& p, double gamma);

}  // namespace swc
