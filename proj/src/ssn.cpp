#include "switchcontrol/ssn.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

namespace swc {

namespace {

Point2 node(const Vec& stacked, Eigen::Index m, Eigen::Index i) { return {stacked[i], stacked[m + i]}; }

const char* sparse_scalar_name(int r) {
  switch (r) {
    case 0: return "zero";
    case 1: return "band";
    default: return "outer";
  }
}

}  // namespace

// --- componentwise penalties ------------------------------------------------

Point2 SparsePenalty::h(Point2 q, double gamma) const {
  return {sparse_my(q.c1, p_, gamma), sparse_my(q.c2, p_, gamma)};
}

Deriv2x2 SparsePenalty::dh(Point2 q, double gamma) const {
  return {sparse_newton_deriv(q.c1, p_, gamma), 0.0, 0.0, sparse_newton_deriv(q.c2, p_, gamma)};
}

int SparsePenalty::region(Point2 q, double gamma) const {
  return 3 * sparse_region(q.c1, p_, gamma) + sparse_region(q.c2, p_, gamma);
}

std::string SparsePenalty::region_name(int code) const {
  return std::string(sparse_scalar_name(code / 3)) + "|" + sparse_scalar_name(code % 3);
}

double SparsePenalty::value(Point2 v) const { return sparse_value(v.c1, p_) + sparse_value(v.c2, p_); }

Point2 MultibangPenalty::h(Point2 q, double gamma) const {
  return {mb_my(q.c1, p_, gamma), mb_my(q.c2, p_, gamma)};
}

Deriv2x2 MultibangPenalty::dh(Point2 q, double gamma) const {
  return {mb_newton_deriv(q.c1, p_, gamma), 0.0, 0.0, mb_newton_deriv(q.c2, p_, gamma)};
}

int MultibangPenalty::scalar_code(double q, double gamma) const {
  return mb_prox_case(q, p_, gamma).which.code(static_cast<int>(p_.levels().size()));
}

int MultibangPenalty::region(Point2 q, double gamma) const {
  const int base = 4 * static_cast<int>(p_.levels().size());
  return base * scalar_code(q.c1, gamma) + scalar_code(q.c2, gamma);
}

std::string MultibangPenalty::region_name(int code) const {
  const int d = static_cast<int>(p_.levels().size());
  const int base = 4 * d;
  auto name = [d](int c) {
    if (c < d) return "L" + std::to_string(c);
    if (c == d) return std::string("C");
    if (c < 3 * d + 1) {
      const int k = c - d - 1;
      return "T" + std::to_string(k / 2) + (k % 2 ? "+" : "-");
    }
    return "J" + std::to_string(c - 3 * d - 1);
  };
  return name(code / base) + "|" + name(code % base);
}

double MultibangPenalty::value(Point2 v) const { return mb_value(v.c1, p_) + mb_value(v.c2, p_); }

// --- config and labels ------------------------------------------------------

void SolverConfig::validate() const {
  if (!(gamma0 > 0.0)) throw std::invalid_argument("gamma0 must be positive");
  if (!(gamma_factor > 0.0 && gamma_factor < 1.0)) throw std::invalid_argument("gamma_factor must lie in (0,1)");
  if (!(gamma_min > 0.0)) throw std::invalid_argument("gamma_min must be positive");
  if (!(residual_tol > 0.0)) throw std::invalid_argument("residual_tol must be positive");
  if (newton_max_iter < 1) throw std::invalid_argument("newton_max_iter must be at least 1");
  if (backtrack_max_halvings < 0) throw std::invalid_argument("backtrack_max_halvings must be nonnegative");
  if (!(backtrack_min_step > 0.0)) throw std::invalid_argument("backtrack_min_step must be positive");
}

std::string_view to_string(StageStatus s) {
  switch (s) {
    case StageStatus::Converged: return "converged";
    case StageStatus::BacktrackStall: return "backtrack_stall";
    case StageStatus::MaxIterations: return "max_iterations";
    case StageStatus::LinearSolveFailure: return "linear_solve_failure";
  }
  return "?";
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::SingleStep: return "single_step";
    case Termination::GammaMin: return "gamma_min";
    case Termination::Aborted: return "aborted";
  }
  return "?";
}

NewtonState NewtonState::zeros(const ControlProblem& prob, double gamma) {
  return {Vec::Zero(prob.state_size()), Vec::Zero(2 * prob.control_size()), gamma};
}

double eval_objective(const ControlProblem& prob, const ControlField& u, const PointwisePenalty& pen) {
  const Vec diff = prob.apply_S(u) - prob.target();
  double g = 0.0;
  const Vec& w = prob.control_weights();
  for (Eigen::Index i = 0; i < u.size(); ++i) g += w[i] * pen.value({u.u1[i], u.u2[i]});
  return 0.5 * prob.state_dot(diff, diff) + g;
}

// --- solver -----------------------------------------------------------------

SsnSolver::SsnSolver(const ControlProblem& prob, const PointwisePenalty& pen, SolverConfig cfg)
    : prob_(prob), pen_(pen), cfg_(cfg) {
  cfg_.validate();
  k_ = prob_.normal_matrix();
}

Vec SsnSolver::control_of(const Vec& p, double gamma) const {
  const Eigen::Index m = prob_.control_size();
  Vec u(2 * m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Point2 hv = pen_.h(node(p, m, i), gamma);
    u[i] = hv.c1;
    u[m + i] = hv.c2;
  }
  return u;
}

Residual SsnSolver::residual(const NewtonState& s) const {
  Residual r;
  r.r1 = s.y - prob_.apply_S(control_of(s.p, s.gamma));
  r.r2 = s.p + prob_.apply_Sstar(s.y - prob_.target());
  r.norm = std::sqrt(prob_.state_dot(r.r1, r.r1) + prob_.control_dot(r.r2, r.r2));
  r.max_norm = std::max(r.r1.lpNorm<Eigen::Infinity>(), r.r2.lpNorm<Eigen::Infinity>());
  return r;
}

NewtonStep SsnSolver::newton_step(const NewtonState& s) const {
  const Eigen::Index m = prob_.control_size();
  const Eigen::Index n = 2 * m;
  const Residual r = residual(s);

  std::vector<Deriv2x2> blocks(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) blocks[static_cast<std::size_t>(i)] = pen_.dh(node(s.p, m, i), s.gamma);
  auto apply_d = [&](const Vec& v) {
    Vec out(n);
    for (Eigen::Index i = 0; i < m; ++i) {
      const Point2 dv = blocks[static_cast<std::size_t>(i)].apply({v[i], v[m + i]});
      out[i] = dv.c1;
      out[m + i] = dv.c2;
    }
    return out;
  };

  // (I + K D) dp = -r2 + S* r1, then dy = -r1 + S D dp
  Eigen::MatrixXd sys = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Deriv2x2& d = blocks[static_cast<std::size_t>(i)];
    sys.col(i) += d.a11 * k_.col(i) + d.a21 * k_.col(m + i);
    sys.col(m + i) += d.a12 * k_.col(i) + d.a22 * k_.col(m + i);
  }
  const Vec rhs = -r.r2 + prob_.apply_Sstar(r.r1);

  NewtonStep step;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys);
  step.dp = lu.solve(rhs);
  const double scale = sys.lpNorm<Eigen::Infinity>() * step.dp.lpNorm<Eigen::Infinity>() +
                       rhs.lpNorm<Eigen::Infinity>();
  const double err = (sys * step.dp - rhs).lpNorm<Eigen::Infinity>();
  step.backward_error = scale > 0.0 ? err / scale : err;
  if (!step.dp.allFinite() || !(step.backward_error <= 1e-10)) {
    throw LinearSolveFailure("Newton system solve failed, backward error " + std::to_string(step.backward_error));
  }
  step.dy = -r.r1 + prob_.apply_S(apply_d(step.dp));
  return step;
}

std::vector<int> SsnSolver::active_codes(const Vec& p, double gamma) const {
  const Eigen::Index m = prob_.control_size();
  std::vector<int> codes(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) codes[static_cast<std::size_t>(i)] = pen_.region(node(p, m, i), gamma);
  return codes;
}

std::map<std::string, int> SsnSolver::active_sets(const Vec& p, double gamma) const {
  std::map<std::string, int> counts;
  if (pen_.kind() == "switching") {
    for (int r = 0; r < kNumRegionGamma; ++r) counts[pen_.region_name(r)] = 0;
  }
  for (int c : active_codes(p, gamma)) ++counts[pen_.region_name(c)];
  return counts;
}

StageRecord SsnSolver::solve_fixed_gamma(NewtonState& s) const {
  StageRecord rec;
  rec.gamma = s.gamma;
  Residual res = residual(s);
  rec.residuals.push_back(res.norm);
  rec.residuals_max.push_back(res.max_norm);
  std::vector<int> codes = active_codes(s.p, s.gamma);

  for (int it = 1; it <= cfg_.newton_max_iter; ++it) {
    NewtonStep step;
    try {
      step = newton_step(s);
    } catch (const LinearSolveFailure&) {
      rec.status = StageStatus::LinearSolveFailure;
      rec.active_counts = active_sets(s.p, s.gamma);
      return rec;
    }

    // Plain decrease; residuals already far below tolerance are accepted as is
    // so that rounding noise cannot stall the active-set check.
    std::optional<NewtonState> accepted;
    Residual accepted_res;
    double tau = 1.0;
    for (int i = 0; i <= cfg_.backtrack_max_halvings; ++i, tau *= 0.5) {
      if (tau < cfg_.backtrack_min_step) break;
      NewtonState trial{s.y + tau * step.dy, s.p + tau * step.dp, s.gamma};
      Residual tres = residual(trial);
      if (tres.norm < res.norm || tres.norm <= 0.01 * cfg_.residual_tol) {
        accepted = std::move(trial);
        accepted_res = std::move(tres);
        break;
      }
    }
    if (!accepted) {
      rec.status = StageStatus::BacktrackStall;
      rec.active_counts = active_sets(s.p, s.gamma);
      return rec;
    }
    s = std::move(*accepted);
    res = std::move(accepted_res);
    rec.iterations = it;
    rec.steps.push_back(tau);
    rec.residuals.push_back(res.norm);
    rec.residuals_max.push_back(res.max_norm);

    std::vector<int> next = active_codes(s.p, s.gamma);
    const bool same = next == codes;
    codes = std::move(next);
    if (same && res.norm < cfg_.residual_tol) {
      rec.status = StageStatus::Converged;
      rec.active_counts = active_sets(s.p, s.gamma);
      return rec;
    }
  }
  rec.status = StageStatus::MaxIterations;
  rec.active_counts = active_sets(s.p, s.gamma);
  return rec;
}

ContinuationReport SsnSolver::continuation() const {
  ContinuationReport rep;
  rep.problem = prob_.name();
  rep.penalty = pen_.kind();

  NewtonState s = NewtonState::zeros(prob_, cfg_.gamma0);
  std::optional<NewtonState> best;
  int failures = 0;
  // gamma_k = gamma0 * factor^k; dividing by an integral 1/factor keeps 1e-9 exact
  const double inv = 1.0 / cfg_.gamma_factor;
  const bool integral = std::abs(inv - std::round(inv)) <= 1e-12 * inv;
  auto gamma_at = [&](int k) {
    return integral ? cfg_.gamma0 / std::pow(std::round(inv), k) : cfg_.gamma0 * std::pow(cfg_.gamma_factor, k);
  };
  for (int k = 0;; ++k) {
    const double gamma = gamma_at(k);
    s.gamma = gamma;
    StageRecord rec = solve_fixed_gamma(s);
    const bool ok = rec.status == StageStatus::Converged;
    // A one-step stage ends the path only if the iterate also solves the
    // system at the next gamma, which is what stopping there presumes.
    bool stop = false;
    if (ok && rec.iterations == 1) {
      NewtonState next = s;
      next.gamma = gamma_at(k + 1);
      rec.next_gamma_residual = residual(next).norm;
      stop = *rec.next_gamma_residual < cfg_.residual_tol;
    }
    rep.stages.push_back(std::move(rec));
    if (ok) {
      best = s;
      failures = 0;
      if (stop) {
        rep.termination = Termination::SingleStep;
        break;
      }
    } else if (++failures >= 2) {
      rep.termination = Termination::Aborted;
      break;
    }
    if (gamma <= cfg_.gamma_min * (1.0 + 1e-12)) {
      rep.termination = Termination::GammaMin;
      break;
    }
  }

  rep.has_solution = best.has_value();
  const NewtonState& fin = best ? *best : s;
  const Eigen::Index m = prob_.control_size();
  rep.gamma_final = fin.gamma;
  rep.state = fin.y;
  rep.dual = ControlField::from_stacked(fin.p);
  rep.control = ControlField::from_stacked(control_of(fin.p, fin.gamma));
  rep.active_counts = active_sets(fin.p, fin.gamma);
  rep.final_residual = residual(fin).norm;
  rep.objective = eval_objective(prob_, rep.control, pen_);

  const Vec& w = prob_.control_weights();
  ArcMeasures arcs;
  bool have_arcs = true;
  for (Eigen::Index i = 0; i < m; ++i) {
    const Point2 q = node(fin.p, m, i);
    rep.node_regions.push_back(pen_.region_name(pen_.region(q, fin.gamma)));
    const std::optional<Arc> a = pen_.arc(q, fin.gamma);
    if (!a) {
      have_arcs = false;
      continue;
    }
    rep.node_arcs.emplace_back(to_string(*a));
    switch (*a) {
      case Arc::Switching:
        arcs.switching += w[i];
        ++arcs.n_switching;
        break;
      case Arc::FreeBoundary:
        arcs.free_boundary += w[i];
        ++arcs.n_free_boundary;
        [[fallthrough]];
      case Arc::Free:
        arcs.free += w[i];
        ++arcs.n_free;
        break;
      case Arc::Singular:
        arcs.singular += w[i];
        ++arcs.n_singular;
        break;
    }
  }
  if (have_arcs) {
    rep.arcs = arcs;
    rep.gap_bound = pen_.beta() * (arcs.free_boundary + 2.0 * arcs.singular);
  } else {
    rep.node_arcs.clear();
  }
  return rep;
}

}  // namespace swc
