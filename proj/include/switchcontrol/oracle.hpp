#pragma once

// Brute-force references for the closed forms. Everything here works from the
// raw cost g (or its conjugate) evaluated point by point; nothing reads the
// closed-form modules.

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace swc::oracle {

using Point = std::vector<double>;
using ScalarFn = std::function<double(std::span<const double>)>;
using VectorFn = std::function<Point(std::span<const double>)>;

class BoxTooSmall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Search box and lattice. The coarse lattice is {k * coarse_step} clipped to
/// the box, so coordinate lines through the origin are sampled exactly; every
/// refinement round divides the step by `refine_factor` and hill-climbs on the
/// finer lattice anchored at the current best point.
struct GridSpec {
  Point lower;
  Point upper;
  double coarse_step = 0.0;
  int refine_factor = 20;
  int refine_rounds = 3;
  /// Extra points always evaluated and used as seeds (isolated minima of g).
  std::vector<Point> atoms;
  /// When true the box is the domain of g and optima on its faces are legitimate.
  bool box_is_domain = false;

  void validate() const;
  std::size_t dims() const { return lower.size(); }
  double final_step() const;

  /// Cube of half-width `radius` around `center`, with `points_per_dim` coarse samples.
  static GridSpec cube(const Point& center, double radius, int points_per_dim);
};

/// sup_v q.v - g(v) over the grid. Throws BoxTooSmall if the maximizer sits on
/// a face of a non-domain box.
double conj_oracle(const ScalarFn& g, std::span<const double> q, const GridSpec& grid);

/// argmin_w gstar(w) + |w - v|^2 / (2 gamma) over the grid.
Point prox_oracle(const ScalarFn& gstar, std::span<const double> v, double gamma,
                  const GridSpec& grid);

/// Central-difference Jacobian, entry (i, j) = d h_i / d q_j.
Eigen::MatrixXd fd_jacobian(const VectorFn& h, std::span<const double> q, double eps);

/// Conjugate search box for a cost with growth at least alpha/2 |v|^2: the
/// maximizer satisfies |v| <= 2|q|/alpha, widened by `margin`.
GridSpec conj_box(std::span<const double> q, double alpha, double margin, int points_per_dim);

}  // namespace swc::oracle
