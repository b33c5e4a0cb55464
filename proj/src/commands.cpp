#include "switchcontrol/commands.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>

#include "switchcontrol/report_io.hpp"

namespace swc {

namespace {

std::unique_ptr<ControlProblem> build(const RunConfig& cfg) {
  auto prob = make_problem(cfg.problem, cfg.nx, cfg.nt);
  if (cfg.zero_target) prob->zero_target();
  return prob;
}

void log_stages(const ContinuationReport& rep, std::ostream& log) {
  for (const StageRecord& s : rep.stages) {
    log << "  gamma " << s.gamma << ": " << to_string(s.status) << " after " << s.iterations << " steps, residual "
        << s.residuals.back() << '\n';
  }
  log << "  termination " << to_string(rep.termination) << ", gamma_final " << rep.gamma_final << '\n';
}

std::filesystem::path out_dir(const RunConfig& cfg) {
  std::filesystem::path dir(cfg.out);
  std::filesystem::create_directories(dir);
  return dir;
}

ContinuationReport solve(const ControlProblem& prob, const RunConfig& cfg, double beta, std::ostream& log) {
  const auto pen = make_penalty(cfg, beta);
  SsnSolver solver(prob, *pen, cfg.solver);
  ContinuationReport rep = solver.continuation();
  log_stages(rep, log);
  return rep;
}

}  // namespace

ContinuationReport run_continuation(const RunConfig& cfg, double beta, std::ostream& log) {
  const auto prob = build(cfg);
  return solve(*prob, cfg, beta, log);
}

int cmd_run(const RunConfig& cfg, std::ostream& log) {
  const auto prob = build(cfg);
  log << "run " << cfg.problem << " alpha=" << cfg.alpha << " beta=" << cfg.beta << " penalty=" << cfg.penalty
      << '\n';
  const ContinuationReport rep = solve(*prob, cfg, cfg.beta, log);
  const auto dir = out_dir(cfg);
  write_report((dir / "report.json").string(), rep);
  write_control_csv((dir / "control.csv").string(), *prob, rep);
  write_state_csv((dir / "state.csv").string(), *prob, rep);
  for (const auto& [name, n] : rep.active_counts) {
    if (n > 0) log << "  " << name << ": " << n << '\n';
  }
  return rep.termination == Termination::Aborted ? kExitAborted : kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& log) {
  const std::vector<double> betas = cfg.sweep_betas.empty() ? std::vector<double>{cfg.beta} : cfg.sweep_betas;
  const auto prob = build(cfg);
  std::vector<SweepRow> rows;
  bool aborted = false;
  for (double beta : betas) {
    log << "sweep beta=" << beta << '\n';
    rows.push_back({beta, solve(*prob, cfg, beta, log)});
    aborted = aborted || rows.back().report.termination == Termination::Aborted;
  }
  write_sweep_csv((out_dir(cfg) / "sweep.csv").string(), rows);
  return aborted ? kExitAborted : kExitOk;
}

int cmd_prox_table(const RunConfig& cfg, std::ostream& log) {
  const SwitchingParams p(cfg.alpha, cfg.beta);
  const auto path = out_dir(cfg) / "regions.csv";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << "q1,q2,region,h1,h2\n";
  const int n = cfg.table_points;
  const double step = (cfg.table_max - cfg.table_min) / (n - 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Point2 q{cfg.table_min + i * step, cfg.table_min + j * step};
      const Point2 h = my_grad(q, p, cfg.table_gamma);
      out << fmt17(q.c1) << ',' << fmt17(q.c2) << ',' << to_string(classify_gamma(q, p, cfg.table_gamma)) << ','
          << fmt17(h.c1) << ',' << fmt17(h.c2) << '\n';
    }
  }
  log << "wrote " << n * n << " rows to " << path.string() << '\n';
  return kExitOk;
}

int cmd_verify(const verify::Options& opts, std::ostream& log) {
  bool ok = true;
  for (const verify::Suite& suite : verify::all_suites()) {
    const verify::SuiteResult r = suite.run(opts);
    log << (r.passed() ? "PASS " : "FAIL ") << r.name << " (" << r.checks << " checks, " << r.failures
        << " failures, " << r.seconds << " s)\n";
    if (!r.passed()) log << "  first failure: " << r.first_failure << '\n';
    ok = ok && r.passed();
  }
  return ok ? kExitOk : 1;
}

}  // namespace swc
