#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "switchcontrol/commands.hpp"
#include "switchcontrol/config.hpp"
#include "switchcontrol/pde.hpp"
#include "switchcontrol/report_io.hpp"
#include "switchcontrol/ssn.hpp"
#include "switchcontrol/switching.hpp"
#include "switchcontrol/verify.hpp"

namespace py = pybind11;
using namespace swc;

namespace {

using Pair = std::pair<double, double>;

Point2 pt(Pair p) { return {p.first, p.second}; }
Pair tup(Point2 p) { return {p.c1, p.c2}; }

py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_switchcontrol, m) {
  m.doc() = "Switching-cost proximal maps and a semismooth Newton solver for linear PDE control";

  py::class_<SwitchingParams>(m, "SwitchingParams")
      .def(py::init<double, double>(), py::arg("alpha"), py::arg("beta"))
      .def_property_readonly("alpha", &SwitchingParams::alpha)
      .def_property_readonly("beta", &SwitchingParams::beta)
      .def_property_readonly("threshold", &SwitchingParams::threshold);

  m.def("g_value", [](Pair v, const SwitchingParams& p) { return g_value(pt(v), p); });
  m.def("g_conj", [](Pair q, const SwitchingParams& p) { return g_conj(pt(q), p); });
  m.def("g_biconj", [](Pair v, const SwitchingParams& p) { return g_biconj(pt(v), p); });
  m.def("prox_conj", [](Pair v, const SwitchingParams& p, double gamma) { return tup(prox_conj(pt(v), p, gamma)); });
  m.def("my_grad", [](Pair q, const SwitchingParams& p, double gamma) { return tup(my_grad(pt(q), p, gamma)); });
  m.def("newton_deriv", [](Pair q, const SwitchingParams& p, double gamma) {
    const Deriv2x2 d = newton_deriv(pt(q), p, gamma);
    Eigen::Matrix2d out;
    out << d.a11, d.a12, d.a21, d.a22;
    return out;
  });
  m.def("classify_gamma", [](Pair q, const SwitchingParams& p, double gamma) {
    return std::string(to_string(classify_gamma(pt(q), p, gamma)));
  });
  m.def("classify_exact", [](Pair q, const SwitchingParams& p) { return std::string(to_string(classify_exact(pt(q), p))); });
  m.def("arc_label", [](Pair q, const SwitchingParams& p) { return std::string(to_string(arc_label(pt(q), p))); });
  m.def("gap_pointwise", [](Pair v, Pair q, const SwitchingParams& p) { return gap_pointwise(pt(v), pt(q), p); });

  py::class_<ControlProblem>(m, "ControlProblem")
      .def_property_readonly("name", &ControlProblem::name)
      .def_property_readonly("control_size", &ControlProblem::control_size)
      .def_property_readonly("state_size", &ControlProblem::state_size)
      .def("apply_S", py::overload_cast<const Vec&>(&ControlProblem::apply_S, py::const_), py::arg("u"))
      .def("apply_Sstar", &ControlProblem::apply_Sstar, py::arg("w"))
      .def("state_dot", &ControlProblem::state_dot)
      .def("control_dot", &ControlProblem::control_dot)
      .def_property_readonly("target", &ControlProblem::target)
      .def_property_readonly("control_weights", &ControlProblem::control_weights)
      .def_property_readonly("control_coords", &ControlProblem::control_coords);
  py::class_<EllipticProblem, ControlProblem>(m, "EllipticProblem").def(py::init<int>(), py::arg("n") = 128);
  py::class_<ParabolicProblem, ControlProblem>(m, "ParabolicProblem")
      .def(py::init<int, int>(), py::arg("nx") = 128, py::arg("nt") = 512);

  m.def(
      "solve",
      [](const std::string& problem, double alpha, double beta, int nx, int nt, double gamma_min, bool zero_target) {
        RunConfig cfg;
        cfg.problem = problem;
        cfg.alpha = alpha;
        cfg.beta = beta;
        cfg.nx = nx;
        cfg.nt = nt;
        cfg.solver.gamma_min = gamma_min;
        cfg.zero_target = zero_target;
        cfg.validate();
        std::ostringstream log;
        ContinuationReport rep;
        {
          py::gil_scoped_release release;
          rep = run_continuation(cfg, beta, log);
        }
        return to_python(to_json(rep));
      },
      py::arg("problem") = "elliptic2d", py::arg("alpha") = 1e-3, py::arg("beta") = 1e-3, py::arg("nx") = 128,
      py::arg("nt") = 512, py::arg("gamma_min") = 1e-16, py::arg("zero_target") = false,
      "Run the gamma continuation for the switching penalty; returns the report as a dict.");

  m.def(
      "verify",
      [](int count, std::uint64_t seed) {
        verify::Options o;
        o.count = count;
        o.seed = seed;
        py::dict out;
        for (const verify::SuiteResult& r : verify::run_all(o)) {
          out[py::str(r.name)] = py::make_tuple(r.checks, r.failures, r.first_failure);
        }
        return out;
      },
      py::arg("count") = 100, py::arg("seed") = 20190101,
      "Run the property suites; maps suite name to (checks, failures, first_failure).");

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
}
