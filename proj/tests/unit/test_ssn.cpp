#include <cmath>
#include <random>

#include "catch_amalgamated.hpp"
#include "switchcontrol/pde.hpp"
#include "switchcontrol/ssn.hpp"

using namespace swc;
using Catch::Matchers::WithinAbs;

TEST_CASE("active sets") {
  const EllipticProblem prob(16);
  const SwitchingPenalty pen(SwitchingParams(1.0, 0.5));
  const SsnSolver solver(prob, pen, {});
  const Vec zero = Vec::Zero(32);
  auto counts = solver.active_sets(zero, 1.0);
  CHECK(counts.size() == 7);
  CHECK(counts["Q12g"] == 16);

  Vec p = Vec::Zero(32);
  p.head(16).setConstant(4.0);
  counts = solver.active_sets(p, 1.0);
  CHECK(counts["Q1g"] == 16);
  int total = 0;
  for (const auto& [name, n] : counts) total += n;
  CHECK(total == 16);
}

TEST_CASE("zero target gives the zero solution") {
  EllipticProblem prob(16);
  prob.zero_target();
  const SwitchingPenalty pen(SwitchingParams(1e-3, 1e-3));
  const SsnSolver solver(prob, pen, {});
  NewtonState s = NewtonState::zeros(prob, 1.0);
  const NewtonStep step = solver.newton_step(s);
  CHECK(step.dp.norm() == 0.0);
  const StageRecord rec = solver.solve_fixed_gamma(s);
  CHECK(rec.status == StageStatus::Converged);
  CHECK(rec.iterations == 1);
  CHECK(solver.residual(s).norm <= 1e-10);

  const ContinuationReport rep = solver.continuation();
  CHECK(rep.stages.size() == 1);
  CHECK(rep.termination == Termination::SingleStep);
  CHECK(rep.control.stacked().norm() == 0.0);
  REQUIRE(rep.gap_bound);
  CHECK(*rep.gap_bound == 0.0);
}

TEST_CASE("Newton step solves the linearized system") {
  const EllipticProblem prob(20);
  const SwitchingPenalty pen(SwitchingParams(1e-3, 1e-3));
  const SsnSolver solver(prob, pen, {});
  std::mt19937_64 rng(9);
  std::normal_distribution<double> nd(0.0, 2e-3);
  NewtonState s = NewtonState::zeros(prob, 1e-4);
  for (auto& x : s.p) x = nd(rng);
  for (auto& x : s.y) x = 0.01 * nd(rng);

  const Residual r = solver.residual(s);
  const NewtonStep st = solver.newton_step(s);
  CHECK(st.backward_error <= 1e-10);
  // linearization: r + J (dy, dp) = 0 with J built from dh at s.p
  const Eigen::Index m = 20;
  Vec ddp(2 * m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Point2 d = pen.dh({s.p[i], s.p[m + i]}, s.gamma).apply({st.dp[i], st.dp[m + i]});
    ddp[i] = d.c1;
    ddp[m + i] = d.c2;
  }
  const Vec l1 = r.r1 + st.dy - prob.apply_S(ddp);
  const Vec l2 = r.r2 + st.dp + prob.apply_Sstar(st.dy);
  CHECK(l1.norm() <= 1e-9 * (r.r1.norm() + st.dy.norm()));
  CHECK(l2.norm() <= 1e-9 * (r.r2.norm() + st.dp.norm()));
}

TEST_CASE("fixed gamma stage on the elliptic problem") {
  const EllipticProblem prob(128);
  const SwitchingPenalty pen(SwitchingParams(1e-3, 1e-3));
  const SsnSolver solver(prob, pen, {});
  NewtonState s = NewtonState::zeros(prob, 1.0);
  const StageRecord rec = solver.solve_fixed_gamma(s);
  CHECK(rec.status == StageStatus::Converged);
  CHECK(rec.iterations <= 5);
  for (std::size_t k = 1; k < rec.residuals.size(); ++k) CHECK(rec.residuals[k] < rec.residuals[k - 1]);
  for (double t : rec.steps) CHECK(t == 1.0);
}

TEST_CASE("continuation on a small parabolic problem") {
  const ParabolicProblem prob(32, 64);
  const SwitchingPenalty pen(SwitchingParams(0.1, 1.0));
  SolverConfig cfg;
  cfg.gamma_min = 1e-10;
  const SsnSolver solver(prob, pen, cfg);
  const ContinuationReport rep = solver.continuation();
  REQUIRE(rep.has_solution);
  CHECK(rep.gamma_final <= 1e-6);
  for (const StageRecord& st : rep.stages) {
    for (std::size_t k = 1; k < st.residuals.size(); ++k) CHECK(st.residuals[k] < st.residuals[k - 1]);
  }
  REQUIRE(rep.arcs);
  CHECK(rep.arcs->n_free == 0);
  CHECK(rep.arcs->free_boundary <= rep.arcs->free);
  CHECK_THAT(*rep.gap_bound, WithinAbs(1.0 * (rep.arcs->free_boundary + 2.0 * rep.arcs->singular), 1e-15));
  int total = 0;
  for (const auto& [name, n] : rep.active_counts) total += n;
  CHECK(total == 64);
}

TEST_CASE("other penalties run through the same solver") {
  const ParabolicProblem prob(24, 32);
  SolverConfig cfg;
  cfg.gamma_min = 1e-8;
  const SparsePenalty sp(SparseParams(0.1, 0.1));
  const ContinuationReport a = SsnSolver(prob, sp, cfg).continuation();
  CHECK(a.has_solution);
  CHECK_FALSE(a.arcs.has_value());
  const MultibangPenalty mb(MultibangParams(0.1, 0.1, {-1.0, 0.0, 1.0}));
  const ContinuationReport b = SsnSolver(prob, mb, cfg).continuation();
  CHECK(b.has_solution);
  CHECK(b.control.stacked().maxCoeff() <= 1.0 + 1e-6);
  CHECK(b.control.stacked().minCoeff() >= -1.0 - 1e-6);
}

TEST_CASE("solver configuration is validated") {
  SolverConfig cfg;
  cfg.gamma_factor = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.newton_max_iter = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
