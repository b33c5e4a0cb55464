#pragma once

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace swc {

using Vec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;

class ShapeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Two control components over the same grid. Most numerics work on the
/// stacked vector [u1; u2].
struct ControlField {
  Vec u1;
  Vec u2;

  static ControlField zeros(Eigen::Index m);
  static ControlField from_stacked(const Vec& s);
  Vec stacked() const;
  Eigen::Index size() const { return u1.size(); }
};

using DualField = ControlField;

/// Discrete linear control problem: S maps stacked controls to states,
/// S* is its adjoint for the state pairing and the control pairing R.
class ControlProblem {
 public:
  virtual ~ControlProblem() = default;

  virtual std::string name() const = 0;
  /// Nodes per control component.
  virtual Eigen::Index control_size() const = 0;
  virtual Eigen::Index state_size() const = 0;

  virtual Vec apply_S(const Vec& u) const = 0;
  virtual Vec apply_Sstar(const Vec& w) const = 0;
  virtual double state_dot(const Vec& a, const Vec& b) const = 0;
  /// R-pairing of two stacked controls.
  virtual double control_dot(const Vec& a, const Vec& b) const = 0;

  /// Quadrature weight of each control node (row sums of R).
  const Vec& control_weights() const { return weights_; }
  /// Coordinate of each control node (x1 or t).
  const Vec& control_coords() const { return control_coords_; }
  /// Coordinates of the state unknowns, one row per entry of a state vector.
  const Eigen::MatrixXd& state_coords() const { return state_coords_; }
  const Vec& target() const { return z_; }
  void zero_target() { z_.setZero(); }

  ControlField apply_Sstar_field(const Vec& w) const { return ControlField::from_stacked(apply_Sstar(w)); }
  Vec apply_S(const ControlField& u) const;
  double state_norm(const Vec& a) const { return std::sqrt(state_dot(a, a)); }
  double control_norm(const Vec& a) const { return std::sqrt(control_dot(a, a)); }

  /// Dense S*S on stacked controls, built column by column.
  Eigen::MatrixXd normal_matrix() const;

 protected:
  void check_control(const Vec& u) const;
  void check_state(const Vec& w) const;

  Vec weights_;
  Vec control_coords_;
  Eigen::MatrixXd state_coords_;
  Vec z_;
};

/// -Laplace y = chi_1 u1(x1) + chi_2 u2(x1) on the unit square, P1 elements on
/// a uniform n x n node grid split into right triangles, zero Dirichlet data.
class EllipticProblem final : public ControlProblem {
 public:
  explicit EllipticProblem(int n = 128);

  std::string name() const override { return "elliptic2d"; }
  Eigen::Index control_size() const override { return n_; }
  Eigen::Index state_size() const override { return static_cast<Eigen::Index>(interior_.size()); }
  Vec apply_S(const Vec& u) const override;
  Vec apply_Sstar(const Vec& w) const override;
  double state_dot(const Vec& a, const Vec& b) const override;
  double control_dot(const Vec& a, const Vec& b) const override;
  using ControlProblem::apply_S;

  int n() const { return n_; }
  double h() const { return h_; }
  static double target_fn(double x1, double x2);

  const SpMat& stiffness_full() const { return a_full_; }
  const SpMat& mass_full() const { return m_full_; }
  const SpMat& stiffness() const { return a_ii_; }
  const SpMat& mass() const { return m_ii_; }
  /// Nodal indicator, (n*n) x (2n).
  const SpMat& control_matrix() const { return b_; }
  const SpMat& control_mass() const { return r_; }
  const std::vector<int>& interior_nodes() const { return interior_; }
  Eigen::Index node_index(int i, int j) const { return static_cast<Eigen::Index>(j) * n_ + i; }

  /// Interior solution of A y = M f for a nodal load f on all nodes.
  Vec solve_load(const Vec& f_nodal) const;

 private:
  int n_;
  double h_;
  std::vector<int> interior_;
  SpMat a_full_, m_full_, a_ii_, m_ii_, m_i_all_, b_, g_, r_;
  Eigen::SimplicialLDLT<SpMat> a_solver_;
  Eigen::SimplicialLDLT<SpMat> r_solver_;
};

/// y_t - y_xx = chi_1 u1(t) + chi_2 u2(t) on [-1,1] x (0,2], backward Euler in
/// time (piecewise constant in time), P1 in space, zero initial and boundary data.
class ParabolicProblem final : public ControlProblem {
 public:
  ParabolicProblem(int nx = 128, int nt = 512);

  std::string name() const override { return "parabolic1d"; }
  Eigen::Index control_size() const override { return nt_; }
  Eigen::Index state_size() const override { return static_cast<Eigen::Index>(nt_) * ni_; }
  Vec apply_S(const Vec& u) const override;
  Vec apply_Sstar(const Vec& w) const override;
  double state_dot(const Vec& a, const Vec& b) const override;
  double control_dot(const Vec& a, const Vec& b) const override;
  using ControlProblem::apply_S;

  static constexpr double kFinalTime = 2.0;
  static double forcing(double t, double x);

  int nx() const { return nx_; }
  int nt() const { return nt_; }
  double dt() const { return dt_; }
  const Vec& interior_x() const { return x_; }
  const SpMat& stiffness() const { return a_ii_; }
  const SpMat& mass() const { return m_ii_; }

  /// One backward Euler step: (M + dt A) y = M y_prev + dt * load.
  Vec step(const Vec& y_prev, const Vec& load) const;

 private:
  int nx_;
  int nt_;
  int ni_;
  double dt_;
  Vec x_;
  SpMat a_ii_, m_ii_, g_;
  Eigen::SimplicialLDLT<SpMat> e_solver_;
};

std::unique_ptr<ControlProblem> make_problem(const std::string& kind, int nx, int nt);

}  // namespace swc
