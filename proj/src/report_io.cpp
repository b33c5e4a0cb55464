#include "switchcontrol/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace swc {

using nlohmann::json;

namespace {

json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vec json_vec(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json arcs_json(const ArcMeasures& a) {
  return {{"switching", a.switching},         {"free", a.free},
          {"free_boundary", a.free_boundary}, {"singular", a.singular},
          {"n_switching", a.n_switching},     {"n_free", a.n_free},
          {"n_free_boundary", a.n_free_boundary}, {"n_singular", a.n_singular}};
}

ArcMeasures json_arcs(const json& j) {
  ArcMeasures a;
  a.switching = j.at("switching").get<double>();
  a.free = j.at("free").get<double>();
  a.free_boundary = j.at("free_boundary").get<double>();
  a.singular = j.at("singular").get<double>();
  a.n_switching = j.at("n_switching").get<int>();
  a.n_free = j.at("n_free").get<int>();
  a.n_free_boundary = j.at("n_free_boundary").get<int>();
  a.n_singular = j.at("n_singular").get<int>();
  return a;
}

StageStatus parse_status(const std::string& s) {
  for (StageStatus st : {StageStatus::Converged, StageStatus::BacktrackStall, StageStatus::MaxIterations,
                         StageStatus::LinearSolveFailure}) {
    if (to_string(st) == s) return st;
  }
  throw std::invalid_argument("unknown stage status '" + s + "'");
}

Termination parse_termination(const std::string& s) {
  for (Termination t : {Termination::SingleStep, Termination::GammaMin, Termination::Aborted}) {
    if (to_string(t) == s) return t;
  }
  throw std::invalid_argument("unknown termination '" + s + "'");
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

}  // namespace

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json to_json(const ContinuationReport& rep) {
  json stages = json::array();
  for (const StageRecord& s : rep.stages) {
    stages.push_back({{"gamma", s.gamma},
                      {"iterations", s.iterations},
                      {"status", std::string(to_string(s.status))},
                      {"residuals", s.residuals},
                      {"residuals_max", s.residuals_max},
                      {"steps", s.steps},
                      {"active_counts", s.active_counts},
                      {"next_gamma_residual", s.next_gamma_residual ? json(*s.next_gamma_residual) : json(nullptr)}});
  }
  json j{{"problem", rep.problem},
         {"penalty", rep.penalty},
         {"termination", std::string(to_string(rep.termination))},
         {"has_solution", rep.has_solution},
         {"gamma_final", rep.gamma_final},
         {"objective", rep.objective},
         {"final_residual", rep.final_residual},
         {"active_counts", rep.active_counts},
         {"arcs", rep.arcs ? arcs_json(*rep.arcs) : json(nullptr)},
         {"gap_bound", rep.gap_bound ? json(*rep.gap_bound) : json(nullptr)},
         {"stages", stages},
         {"control", {{"u1", vec_json(rep.control.u1)}, {"u2", vec_json(rep.control.u2)}}},
         {"dual", {{"p1", vec_json(rep.dual.u1)}, {"p2", vec_json(rep.dual.u2)}}},
         {"state", vec_json(rep.state)},
         {"node_regions", rep.node_regions},
         {"node_arcs", rep.node_arcs}};
  return j;
}

ContinuationReport report_from_json(const json& j) {
  ContinuationReport rep;
  rep.problem = j.at("problem").get<std::string>();
  rep.penalty = j.at("penalty").get<std::string>();
  rep.termination = parse_termination(j.at("termination").get<std::string>());
  rep.has_solution = j.at("has_solution").get<bool>();
  rep.gamma_final = j.at("gamma_final").get<double>();
  rep.objective = j.at("objective").get<double>();
  rep.final_residual = j.at("final_residual").get<double>();
  rep.active_counts = j.at("active_counts").get<std::map<std::string, int>>();
  if (!j.at("arcs").is_null()) rep.arcs = json_arcs(j.at("arcs"));
  if (!j.at("gap_bound").is_null()) rep.gap_bound = j.at("gap_bound").get<double>();
  for (const json& s : j.at("stages")) {
    StageRecord r;
    r.gamma = s.at("gamma").get<double>();
    r.iterations = s.at("iterations").get<int>();
    r.status = parse_status(s.at("status").get<std::string>());
    r.residuals = s.at("residuals").get<std::vector<double>>();
    r.residuals_max = s.at("residuals_max").get<std::vector<double>>();
    r.steps = s.at("steps").get<std::vector<double>>();
    r.active_counts = s.at("active_counts").get<std::map<std::string, int>>();
    if (!s.at("next_gamma_residual").is_null()) r.next_gamma_residual = s.at("next_gamma_residual").get<double>();
    rep.stages.push_back(std::move(r));
  }
  rep.control = {json_vec(j.at("control").at("u1")), json_vec(j.at("control").at("u2"))};
  rep.dual = {json_vec(j.at("dual").at("p1")), json_vec(j.at("dual").at("p2"))};
  rep.state = json_vec(j.at("state"));
  rep.node_regions = j.at("node_regions").get<std::vector<std::string>>();
  rep.node_arcs = j.at("node_arcs").get<std::vector<std::string>>();
  return rep;
}

void write_report(const std::string& path, const ContinuationReport& rep) {
  auto out = open_out(path);
  out << to_json(rep).dump(1) << '\n';
}

ContinuationReport read_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  return report_from_json(json::parse(in));
}

void write_control_csv(const std::string& path, const ControlProblem& prob, const ContinuationReport& rep) {
  auto out = open_out(path);
  out << "coord,u1,u2,region,arc\n";
  const Vec& x = prob.control_coords();
  for (Eigen::Index i = 0; i < rep.control.size(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    out << fmt17(x[i]) << ',' << fmt17(rep.control.u1[i]) << ',' << fmt17(rep.control.u2[i]) << ','
        << rep.node_regions[k] << ',' << (rep.node_arcs.empty() ? "" : rep.node_arcs[k]) << '\n';
  }
}

void write_state_csv(const std::string& path, const ControlProblem& prob, const ContinuationReport& rep) {
  auto out = open_out(path);
  out << (prob.name() == "parabolic1d" ? "t,x,y,z\n" : "x1,x2,y,z\n");
  const auto& xy = prob.state_coords();
  const Vec& z = prob.target();
  for (Eigen::Index i = 0; i < rep.state.size(); ++i) {
    out << fmt17(xy(i, 0)) << ',' << fmt17(xy(i, 1)) << ',' << fmt17(rep.state[i]) << ',' << fmt17(z[i]) << '\n';
  }
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
  auto out = open_out(path);
  out << "beta,free,free_boundary,singular,gap_bound,objective,n_free,n_free_boundary,n_singular,gamma_final,"
         "termination\n";
  for (const SweepRow& r : rows) {
    const ArcMeasures a = r.report.arcs.value_or(ArcMeasures{});
    out << fmt17(r.beta) << ',' << fmt17(a.free) << ',' << fmt17(a.free_boundary) << ',' << fmt17(a.singular) << ','
        << fmt17(r.report.gap_bound.value_or(0.0)) << ',' << fmt17(r.report.objective) << ',' << a.n_free << ','
        << a.n_free_boundary << ',' << a.n_singular << ',' << fmt17(r.report.gamma_final) << ','
        << to_string(r.report.termination) << '\n';
  }
}

}  // namespace swc
