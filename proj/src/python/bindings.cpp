#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "sdflow/harness.hpp"

namespace py = pybind11;
using namespace sdflow;

PYBIND11_MODULE(_sdflow, m) {
  m.doc() = "Coupled Stokes-Darcy IMEX solver";

  py::enum_<CaseId>(m, "Case")
      .value("EXAMPLE1", CaseId::Example1)
      .value("EXAMPLE2", CaseId::Example2)
      .value("EXAMPLE3", CaseId::Example3);
  py::enum_<SchemeKind>(m, "Scheme").value("BDF2", SchemeKind::BDF2).value("AMB2", SchemeKind::AMB2);
  py::enum_<StartMode>(m, "Start")
      .value("INTERPOLATE", StartMode::Interpolate)
      .value("BDF1_BOOTSTRAP", StartMode::Bdf1Bootstrap)
      .value("ZERO_INTERIOR", StartMode::ZeroInterior);

  py::class_<PhysicalParams>(m, "PhysicalParams")
      .def(py::init<>())
      .def_readwrite("nu", &PhysicalParams::nu)
      .def_readwrite("g", &PhysicalParams::g)
      .def_readwrite("S", &PhysicalParams::S)
      .def_readwrite("K", &PhysicalParams::K)
      .def_readwrite("alpha_bj", &PhysicalParams::alpha_bj)
      .def_readwrite("gamma_f", &PhysicalParams::gamma_f)
      .def_readwrite("gamma_p", &PhysicalParams::gamma_p)
      .def("k_min", &PhysicalParams::k_min)
      .def("validate", &PhysicalParams::validate);

  py::class_<SchemeConfig>(m, "SchemeConfig")
      .def(py::init([](SchemeKind scheme, double dt, double alpha) {
             SchemeConfig c;
             c.scheme = scheme;
             c.dt = dt;
             c.alpha = alpha;
             return c;
           }),
           py::arg("scheme") = SchemeKind::BDF2, py::arg("dt") = 0.0, py::arg("alpha") = 0.8)
      .def_readwrite("scheme", &SchemeConfig::scheme)
      .def_readwrite("alpha", &SchemeConfig::alpha)
      .def_readwrite("dt", &SchemeConfig::dt)
      .def_readwrite("params", &SchemeConfig::params)
      .def_readwrite("start", &SchemeConfig::start)
      .def("validate", &SchemeConfig::validate);

  py::class_<ConvergenceLevel>(m, "ConvergenceLevel")
      .def_readonly("n", &ConvergenceLevel::n)
      .def_readonly("h", &ConvergenceLevel::h)
      .def_readonly("dt", &ConvergenceLevel::dt)
      .def_readonly("steps", &ConvergenceLevel::steps)
      .def_readonly("e_phi", &ConvergenceLevel::e_phi)
      .def_readonly("e_u", &ConvergenceLevel::e_u)
      .def_readonly("e_p", &ConvergenceLevel::e_p)
      .def_readonly("max_div", &ConvergenceLevel::max_div)
      .def_readonly("seconds", &ConvergenceLevel::seconds);
  py::class_<ConvergenceRate>(m, "ConvergenceRate")
      .def_readonly("r_phi", &ConvergenceRate::r_phi)
      .def_readonly("r_u", &ConvergenceRate::r_u)
      .def_readonly("r_p", &ConvergenceRate::r_p);
  py::class_<ConvergenceReport>(m, "ConvergenceReport")
      .def_readonly("levels", &ConvergenceReport::levels)
      .def_readonly("rates", &ConvergenceReport::rates)
      .def_readonly("r_avg", &ConvergenceReport::r_avg);

  py::class_<MonitorSample>(m, "MonitorSample")
      .def_readonly("step", &MonitorSample::step)
      .def_readonly("t", &MonitorSample::t)
      .def_readonly("e_phi", &MonitorSample::e_phi)
      .def_readonly("e_u", &MonitorSample::e_u)
      .def_readonly("e_p", &MonitorSample::e_p)
      .def_readonly("g_energy", &MonitorSample::g_energy)
      .def_readonly("s_norm", &MonitorSample::s_norm)
      .def_readonly("h1_u", &MonitorSample::h1_u)
      .def_readonly("h1_phi", &MonitorSample::h1_phi)
      .def_readonly("div_max", &MonitorSample::div_max)
      .def_readonly("div_dalpha_max", &MonitorSample::div_dalpha_max);
  py::class_<TransientResult>(m, "TransientResult")
      .def_readonly("series", &TransientResult::series)
      .def_readonly("steps", &TransientResult::steps)
      .def_readonly("max_div", &TransientResult::max_div);

  py::register_exception<StabilityError>(m, "StabilityError", PyExc_RuntimeError);

  m.def(
      "run_convergence",
      [](CaseId id, const SchemeConfig& config, const std::vector<int>& subdivisions,
         double theta, double T) {
        py::gil_scoped_release release;
        return run_convergence({id, config.params}, config, subdivisions, theta, T);
      },
      py::arg("case"), py::arg("config"), py::arg("subdivisions"), py::arg("theta") = 1.0,
      py::arg("T") = 1.0);
  m.def(
      "run_longtime",
      [](CaseId id, const SchemeConfig& config, int n, double T, int sample_every) {
        py::gil_scoped_release release;
        return run_longtime({id, config.params}, config, n, T, sample_every);
      },
      py::arg("case"), py::arg("config"), py::arg("n"), py::arg("T"),
      py::arg("sample_every") = 1);
  m.def("snap_time_step", &snap_time_step, py::arg("h"), py::arg("theta"), py::arg("T"));
  m.def(
      "scalar_model",
      [](SchemeKind scheme, double alpha, double a, double b, double dt, double T) {
        return scalar_model(scheme_coefficients(scheme, alpha), a, b, dt, T);
      },
      py::arg("scheme"), py::arg("alpha"), py::arg("a"), py::arg("b"), py::arg("dt"),
      py::arg("T"));
  m.def("emit_report_csv", py::overload_cast<const ConvergenceReport&, const std::filesystem::path&>(&emit_csv));
  m.def("emit_series_csv",
        py::overload_cast<const std::vector<MonitorSample>&, const std::filesystem::path&>(&emit_csv));
  m.def("emit_series_plot",
        py::overload_cast<const std::vector<MonitorSample>&, const std::filesystem::path&>(&emit_plot));
  m.def("factorization_count", &factorization_count);
}
