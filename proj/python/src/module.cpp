#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "capflow/caps.hpp"
#include "capflow/cli.hpp"
#include "capflow/diagnostics.hpp"
#include "capflow/error.hpp"
#include "capflow/flow.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace capflow;

namespace {

// Python side sees one run as a dict of columns rather than a list of structs.
py::dict series_columns(const TimeSeries& series) {
  py::dict out;
  auto column = [&](const char* name, auto member) {
    py::list values;
    for (const auto& s : series.snapshots) values.append(s.*member);
    out[name] = values;
  };
  column("t", &Snapshot::t);
  column("volume", &Snapshot::volume);
  column("W_theta", &Snapshot::W_theta);
  column("I_theta", &Snapshot::I_theta);
  column("phi", &Snapshot::phi);
  column("H_min", &Snapshot::H_min);
  column("H_max", &Snapshot::H_max);
  column("kappa_min", &Snapshot::kappa_min);
  column("stationarity", &Snapshot::stationarity);
  column("rho_minus", &Snapshot::rho_minus);
  column("rho_plus", &Snapshot::rho_plus);
  return out;
}

}  // namespace

PYBIND11_MODULE(_capflow, m) {
  m.doc() = "Capillary power mean curvature flow of radial graphs";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  py::enum_<DimensionMode>(m, "DimensionMode")
      .value("Planar", DimensionMode::Planar)
      .value("Axisymmetric", DimensionMode::Axisymmetric);
  py::enum_<Variant>(m, "Variant")
      .value("VolumePreserving", Variant::VolumePreserving)
      .value("AreaPreserving", Variant::AreaPreserving);
  py::enum_<Verdict>(m, "Verdict")
      .value("Converged", Verdict::Converged)
      .value("TimedOut", Verdict::TimedOut)
      .value("Aborted", Verdict::Aborted);

  py::class_<RadialGraph>(m, "RadialGraph")
      .def(py::init<>())
      .def(py::init([](DimensionMode mode, double theta, std::vector<double> rho, double center) {
             return RadialGraph{mode, theta, std::move(rho), center};
           }),
           "mode"_a, "theta"_a, "rho"_a, "center"_a = 0.0)
      .def_readwrite("mode", &RadialGraph::mode)
      .def_readwrite("theta", &RadialGraph::theta)
      .def_readwrite("rho", &RadialGraph::rho)
      .def_readwrite("center", &RadialGraph::center)
      .def("angles", &RadialGraph::angles)
      .def("__len__", &RadialGraph::size);

  py::class_<SphericalCap>(m, "SphericalCap")
      .def(py::init([](double x0, double r, double theta) { return SphericalCap{x0, r, theta}; }), "x0"_a = 0.0,
           "r"_a = 1.0, "theta"_a = kPi / 2)
      .def_readwrite("x0", &SphericalCap::x0)
      .def_readwrite("r", &SphericalCap::r)
      .def_readwrite("theta", &SphericalCap::theta);

  py::class_<CapQuantities>(m, "CapQuantities")
      .def_readonly("area", &CapQuantities::area)
      .def_readonly("wetted", &CapQuantities::wetted)
      .def_readonly("volume", &CapQuantities::volume)
      .def_readonly("W_theta", &CapQuantities::W_theta)
      .def_readonly("I_theta", &CapQuantities::I_theta)
      .def_readonly("H", &CapQuantities::H);

  py::class_<NodalFields>(m, "NodalFields")
      .def_readonly("H", &NodalFields::H)
      .def_readonly("nuE", &NodalFields::nuE)
      .def_readonly("kappa_profile", &NodalFields::kappa_profile)
      .def_readonly("kappa_azimuthal", &NodalFields::kappa_azimuthal)
      .def_readonly("u", &NodalFields::u)
      .def_readonly("ubar", &NodalFields::ubar);

  py::class_<PerturbationMode>(m, "PerturbationMode")
      .def(py::init([](int k, double amplitude) { return PerturbationMode{k, amplitude}; }), "k"_a, "amplitude"_a)
      .def_readwrite("k", &PerturbationMode::k)
      .def_readwrite("amplitude", &PerturbationMode::amplitude);

  py::class_<FlowConfig>(m, "FlowConfig")
      .def(py::init<>())
      .def_readwrite("mode", &FlowConfig::mode)
      .def_readwrite("alpha", &FlowConfig::alpha)
      .def_readwrite("theta", &FlowConfig::theta)
      .def_readwrite("variant", &FlowConfig::variant)
      .def_readwrite("N", &FlowConfig::N)
      .def_readwrite("cfl_safety", &FlowConfig::cfl_safety)
      .def_readwrite("t_max", &FlowConfig::t_max)
      .def_readwrite("conv_tol", &FlowConfig::conv_tol)
      .def_readwrite("drift_tol", &FlowConfig::drift_tol)
      .def_readwrite("snapshot_stride", &FlowConfig::snapshot_stride)
      .def_readwrite("H_floor", &FlowConfig::H_floor)
      .def_readwrite("radii_stride", &FlowConfig::radii_stride)
      .def_readwrite("initial_radius", &FlowConfig::initial_radius)
      .def_readwrite("perturbations", &FlowConfig::perturbations)
      .def_readwrite("project_constraint", &FlowConfig::project_constraint)
      .def("validate", &FlowConfig::validate)
      .def("__repr__", [](const FlowConfig& c) { return cli::config_echo(c); });

  py::class_<Snapshot>(m, "Snapshot")
      .def_readonly("t", &Snapshot::t)
      .def_readonly("volume", &Snapshot::volume)
      .def_readonly("W_theta", &Snapshot::W_theta)
      .def_readonly("I_theta", &Snapshot::I_theta)
      .def_readonly("phi", &Snapshot::phi)
      .def_readonly("stationarity", &Snapshot::stationarity)
      .def_readonly("graph", &Snapshot::graph);

  py::class_<RunResult>(m, "RunResult")
      .def_property_readonly("verdict", [](const RunResult& r) { return r.verdict; })
      .def_property_readonly("abort_reason", [](const RunResult& r) { return r.series.abort_reason; })
      .def_property_readonly("steps", [](const RunResult& r) { return r.series.steps; })
      .def_property_readonly("snapshots", [](const RunResult& r) { return r.series.snapshots; })
      .def_property_readonly("series", [](const RunResult& r) { return series_columns(r.series); })
      .def_property_readonly("final_graph", [](const RunResult& r) { return r.final_state.graph; })
      .def_property_readonly("final_time", [](const RunResult& r) { return r.final_state.t; });

  m.def("cap_quantities", &caps::cap_quantities, "n"_a, "theta"_a, "r"_a);
  m.def(
      "radius_from_constraint",
      [](int n, double theta, double target, bool volume) {
        return caps::radius_from_constraint(n, theta, target,
                                            volume ? ConstraintKind::Volume : ConstraintKind::CapillaryArea);
      },
      "n"_a, "theta"_a, "target"_a, "volume"_a = true);
  m.def("cap_profile", &caps::cap_profile, "cap"_a, "mode"_a, "nodes"_a);
  m.def("discrete_cap", &flow::discrete_cap, "cap"_a, "mode"_a, "nodes"_a);
  m.def("evaluate_fields", &flow::evaluate_fields, "graph"_a);
  m.def("capillary_radii", [](const RadialGraph& g) {
    const auto r = caps::capillary_radii(g);
    return py::make_tuple(r.rho_minus, r.rho_plus);
  });
  m.def("fit_cap", [](const RadialGraph& g) {
    const auto f = caps::fit_cap(g);
    return py::make_tuple(f.cap, f.residual);
  });

  m.def("parse_config", &cli::parse_config, "text"_a, "force"_a = false);
  m.def("run", &diagnostics::run, "config"_a, py::call_guard<py::gil_scoped_release>());
  m.def(
      "assert_suite",
      [](const RunResult& r, const FlowConfig& config) {
        const auto report = diagnostics::assert_suite(r.series, config);
        py::dict out;
        for (const auto& c : report.checks) out[py::str(c.name)] = py::make_tuple(c.passed, c.margin);
        return out;
      },
      "result"_a, "config"_a);
}
