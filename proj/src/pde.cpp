#include "switchcontrol/pde.hpp"

#include <array>
#include <numbers>

namespace swc {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// P1 element matrices on one triangle, accumulated into the global lists.
void add_triangle(const std::array<int, 3>& nodes, const std::array<std::array<double, 2>, 3>& xy,
                  Triplets& stiff, Triplets& mass) {
  const double x21 = xy[1][0] - xy[0][0], y21 = xy[1][1] - xy[0][1];
  const double x31 = xy[2][0] - xy[0][0], y31 = xy[2][1] - xy[0][1];
  const double det = x21 * y31 - x31 * y21;
  const double area = 0.5 * std::abs(det);
  // gradients of the barycentric coordinates
  const std::array<std::array<double, 2>, 3> grad{{
      {(y21 - y31) / det, (x31 - x21) / det},
      {y31 / det, -x31 / det},
      {-y21 / det, x21 / det},
  }};
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      const double k = area * (grad[a][0] * grad[b][0] + grad[a][1] * grad[b][1]);
      const double m = area / 12.0 * (a == b ? 2.0 : 1.0);
      stiff.emplace_back(nodes[a], nodes[b], k);
      mass.emplace_back(nodes[a], nodes[b], m);
    }
  }
}

// 1-D P1 stiffness and mass on n uniform nodes with spacing h.
void assemble_1d(int n, double h, SpMat& stiff, SpMat& mass) {
  Triplets ks, ms;
  for (int e = 0; e + 1 < n; ++e) {
    const int i = e, j = e + 1;
    ks.emplace_back(i, i, 1.0 / h);
    ks.emplace_back(j, j, 1.0 / h);
    ks.emplace_back(i, j, -1.0 / h);
    ks.emplace_back(j, i, -1.0 / h);
    ms.emplace_back(i, i, h / 3.0);
    ms.emplace_back(j, j, h / 3.0);
    ms.emplace_back(i, j, h / 6.0);
    ms.emplace_back(j, i, h / 6.0);
  }
  stiff.resize(n, n);
  mass.resize(n, n);
  stiff.setFromTriplets(ks.begin(), ks.end());
  mass.setFromTriplets(ms.begin(), ms.end());
}

// Rows `rows` of `a`, all columns (cols == nullptr) or columns `cols`.
SpMat restrict(const SpMat& a, const std::vector<int>& rows, const std::vector<int>* cols) {
  std::vector<int> row_map(static_cast<std::size_t>(a.rows()), -1);
  for (std::size_t k = 0; k < rows.size(); ++k) row_map[static_cast<std::size_t>(rows[k])] = static_cast<int>(k);
  std::vector<int> col_map(static_cast<std::size_t>(a.cols()), -1);
  if (cols) {
    for (std::size_t k = 0; k < cols->size(); ++k) col_map[static_cast<std::size_t>((*cols)[k])] = static_cast<int>(k);
  } else {
    for (std::size_t k = 0; k < col_map.size(); ++k) col_map[k] = static_cast<int>(k);
  }
  Triplets t;
  for (int c = 0; c < a.outerSize(); ++c) {
    for (SpMat::InnerIterator it(a, c); it; ++it) {
      const int r = row_map[static_cast<std::size_t>(it.row())];
      const int cc = col_map[static_cast<std::size_t>(it.col())];
      if (r >= 0 && cc >= 0) t.emplace_back(r, cc, it.value());
    }
  }
  SpMat out(static_cast<Eigen::Index>(rows.size()),
            cols ? static_cast<Eigen::Index>(cols->size()) : a.cols());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

template <class Solver>
void factor(Solver& solver, const SpMat& a, const char* what) {
  solver.compute(a);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error(std::string("factorization failed: ") + what);
  }
}

}  // namespace

// --- ControlField -----------------------------------------------------------

ControlField ControlField::zeros(Eigen::Index m) { return {Vec::Zero(m), Vec::Zero(m)}; }

ControlField ControlField::from_stacked(const Vec& s) {
  if (s.size() % 2 != 0) throw ShapeMismatch("stacked control has odd length");
  const Eigen::Index m = s.size() / 2;
  return {s.head(m), s.tail(m)};
}

Vec ControlField::stacked() const {
  if (u1.size() != u2.size()) throw ShapeMismatch("control components differ in length");
  Vec s(2 * u1.size());
  s << u1, u2;
  return s;
}

// --- ControlProblem ---------------------------------------------------------

Vec ControlProblem::apply_S(const ControlField& u) const { return apply_S(u.stacked()); }

void ControlProblem::check_control(const Vec& u) const {
  if (u.size() != 2 * control_size()) {
    throw ShapeMismatch("control has " + std::to_string(u.size()) + " entries, expected " +
                        std::to_string(2 * control_size()));
  }
}

void ControlProblem::check_state(const Vec& w) const {
  if (w.size() != state_size()) {
    throw ShapeMismatch("state has " + std::to_string(w.size()) + " entries, expected " +
                        std::to_string(state_size()));
  }
}

Eigen::MatrixXd ControlProblem::normal_matrix() const {
  const Eigen::Index n = 2 * control_size();
  Eigen::MatrixXd k(n, n);
  Vec e = Vec::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    e[j] = 1.0;
    k.col(j) = apply_Sstar(apply_S(e));
    e[j] = 0.0;
  }
  return k;
}

// --- elliptic ---------------------------------------------------------------

double EllipticProblem::target_fn(double x1, double x2) {
  constexpr double tau = 2.0 * std::numbers::pi;
  return x1 * std::sin(tau * x1) * std::sin(tau * x2);
}

EllipticProblem::EllipticProblem(int n) : n_(n) {
  if (n < 4) throw std::invalid_argument("elliptic problem needs n >= 4");
  h_ = 1.0 / (n - 1);
  const int nn = n * n;

  Triplets ks, ms;
  ks.reserve(static_cast<std::size_t>(18) * (n - 1) * (n - 1));
  ms.reserve(ks.capacity());
  auto xy = [&](int i, int j) { return std::array<double, 2>{i * h_, j * h_}; };
  for (int j = 0; j + 1 < n; ++j) {
    for (int i = 0; i + 1 < n; ++i) {
      const int p00 = j * n + i, p10 = p00 + 1, p01 = p00 + n, p11 = p01 + 1;
      add_triangle({p00, p10, p11}, {xy(i, j), xy(i + 1, j), xy(i + 1, j + 1)}, ks, ms);
      add_triangle({p00, p11, p01}, {xy(i, j), xy(i + 1, j + 1), xy(i, j + 1)}, ks, ms);
    }
  }
  a_full_.resize(nn, nn);
  m_full_.resize(nn, nn);
  a_full_.setFromTriplets(ks.begin(), ks.end());
  m_full_.setFromTriplets(ms.begin(), ms.end());

  for (int j = 1; j + 1 < n; ++j) {
    for (int i = 1; i + 1 < n; ++i) interior_.push_back(j * n + i);
  }
  a_ii_ = restrict(a_full_, interior_, &interior_);
  m_ii_ = restrict(m_full_, interior_, &interior_);
  m_i_all_ = restrict(m_full_, interior_, nullptr);

  // x2 < 1/4 and x2 > 3/4, decided in integers to avoid rounding at the edges
  Triplets bt;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (4 * j < n - 1) bt.emplace_back(j * n + i, i, 1.0);
      if (4 * j > 3 * (n - 1)) bt.emplace_back(j * n + i, n + i, 1.0);
    }
  }
  b_.resize(nn, 2 * n);
  b_.setFromTriplets(bt.begin(), bt.end());
  g_ = m_i_all_ * b_;

  SpMat dummy;
  assemble_1d(n, h_, dummy, r_);
  // Lumped: with a diagonal pairing the nodewise resolvent is the exact
  // optimality condition of the quadrature sum_i w_i g(u_i).
  r_ = SpMat(Vec(r_ * Vec::Ones(n)).asDiagonal());

  factor(a_solver_, a_ii_, "elliptic stiffness");
  factor(r_solver_, r_, "control mass");

  weights_ = r_ * Vec::Ones(n);
  control_coords_ = Vec::LinSpaced(n, 0.0, 1.0);
  for (int i = 0; i < n; ++i) control_coords_[i] = i * h_;

  const auto ni = static_cast<Eigen::Index>(interior_.size());
  state_coords_.resize(ni, 2);
  z_.resize(ni);
  for (Eigen::Index k = 0; k < ni; ++k) {
    const int node = interior_[static_cast<std::size_t>(k)];
    const double x1 = (node % n) * h_, x2 = (node / n) * h_;
    state_coords_(k, 0) = x1;
    state_coords_(k, 1) = x2;
    z_[k] = target_fn(x1, x2);
  }
}

Vec EllipticProblem::apply_S(const Vec& u) const {
  check_control(u);
  return a_solver_.solve(g_ * u);
}

Vec EllipticProblem::apply_Sstar(const Vec& w) const {
  check_state(w);
  const Vec lambda = a_solver_.solve(m_ii_ * w);
  const Vec gl = g_.transpose() * lambda;
  Vec out(2 * n_);
  out.head(n_) = r_solver_.solve(gl.head(n_));
  out.tail(n_) = r_solver_.solve(gl.tail(n_));
  return out;
}

double EllipticProblem::state_dot(const Vec& a, const Vec& b) const {
  check_state(a);
  check_state(b);
  return a.dot(m_ii_ * b);
}

double EllipticProblem::control_dot(const Vec& a, const Vec& b) const {
  check_control(a);
  check_control(b);
  return a.head(n_).dot(r_ * b.head(n_)) + a.tail(n_).dot(r_ * b.tail(n_));
}

Vec EllipticProblem::solve_load(const Vec& f_nodal) const {
  if (f_nodal.size() != static_cast<Eigen::Index>(n_) * n_) throw ShapeMismatch("nodal load has wrong size");
  return a_solver_.solve(m_i_all_ * f_nodal);
}

// --- parabolic --------------------------------------------------------------

double ParabolicProblem::forcing(double t, double x) {
  return std::abs(t - 1.0 - x) < 0.1 ? 63.0 : 0.0;
}

ParabolicProblem::ParabolicProblem(int nx, int nt) : nx_(nx), nt_(nt) {
  if (nx < 4 || nt < 4) throw std::invalid_argument("parabolic problem needs nx >= 4 and nt >= 4");
  ni_ = nx - 2;
  dt_ = kFinalTime / nt;
  const double hx = 2.0 / (nx - 1);

  SpMat a_full, m_full;
  assemble_1d(nx, hx, a_full, m_full);
  std::vector<int> interior;
  for (int i = 1; i + 1 < nx; ++i) interior.push_back(i);
  a_ii_ = restrict(a_full, interior, &interior);
  m_ii_ = restrict(m_full, interior, &interior);
  const SpMat m_i_all = restrict(m_full, interior, nullptr);

  // x < -1/2 and x > 1/2 with x = -1 + i hx
  Triplets bt;
  for (int i = 0; i < nx; ++i) {
    if (4 * i < nx - 1) bt.emplace_back(i, 0, 1.0);
    if (4 * i > 3 * (nx - 1)) bt.emplace_back(i, 1, 1.0);
  }
  SpMat b(nx, 2);
  b.setFromTriplets(bt.begin(), bt.end());
  g_ = m_i_all * b;

  factor(e_solver_, SpMat(m_ii_ + dt_ * a_ii_), "backward Euler matrix");

  x_.resize(ni_);
  for (int k = 0; k < ni_; ++k) x_[k] = -1.0 + (k + 1) * hx;

  weights_ = Vec::Constant(nt, dt_);
  control_coords_.resize(nt);
  for (int k = 0; k < nt; ++k) control_coords_[k] = (k + 1) * dt_;

  state_coords_.resize(state_size(), 2);
  z_.resize(state_size());
  Vec y = Vec::Zero(ni_);
  Vec f(nx);
  for (int k = 1; k <= nt; ++k) {
    const double t = k * dt_;
    for (int i = 0; i < nx; ++i) f[i] = forcing(t, -1.0 + i * hx);
    y = step(y, m_i_all * f);
    const Eigen::Index off = static_cast<Eigen::Index>(k - 1) * ni_;
    z_.segment(off, ni_) = y;
    state_coords_.block(off, 0, ni_, 1).setConstant(t);
    state_coords_.block(off, 1, ni_, 1) = x_;
  }
}

Vec ParabolicProblem::step(const Vec& y_prev, const Vec& load) const {
  if (y_prev.size() != ni_ || load.size() != ni_) throw ShapeMismatch("time step vectors have wrong size");
  return e_solver_.solve(m_ii_ * y_prev + dt_ * load);
}

Vec ParabolicProblem::apply_S(const Vec& u) const {
  check_control(u);
  Vec out(state_size());
  Vec y = Vec::Zero(ni_);
  for (int k = 0; k < nt_; ++k) {
    const Vec load = g_.col(0) * u[k] + g_.col(1) * u[nt_ + k];
    y = step(y, load);
    out.segment(static_cast<Eigen::Index>(k) * ni_, ni_) = y;
  }
  return out;
}

Vec ParabolicProblem::apply_Sstar(const Vec& w) const {
  check_state(w);
  Vec out(2 * nt_);
  Vec carry = Vec::Zero(ni_);  // M lambda^{k+1}
  const Eigen::MatrixXd gd = Eigen::MatrixXd(g_);
  for (int k = nt_ - 1; k >= 0; --k) {
    const Vec rhs = dt_ * (m_ii_ * w.segment(static_cast<Eigen::Index>(k) * ni_, ni_)) + carry;
    const Vec lambda = e_solver_.solve(rhs);
    out[k] = gd.col(0).dot(lambda);
    out[nt_ + k] = gd.col(1).dot(lambda);
    carry = m_ii_ * lambda;
  }
  return out;
}

double ParabolicProblem::state_dot(const Vec& a, const Vec& b) const {
  check_state(a);
  check_state(b);
  double s = 0.0;
  for (int k = 0; k < nt_; ++k) {
    const Eigen::Index off = static_cast<Eigen::Index>(k) * ni_;
    s += a.segment(off, ni_).dot(m_ii_ * b.segment(off, ni_));
  }
  return dt_ * s;
}

double ParabolicProblem::control_dot(const Vec& a, const Vec& b) const {
  check_control(a);
  check_control(b);
  return dt_ * a.dot(b);
}

std::unique_ptr<ControlProblem> make_problem(const std::string& kind, int nx, int nt) {
  if (kind == "elliptic2d") return std::make_unique<EllipticProblem>(nx);
  if (kind == "parabolic1d") return std::make_unique<ParabolicProblem>(nx, nt);
  throw std::invalid_argument("unknown problem kind: " + kind);
}

}  // namespace swc
