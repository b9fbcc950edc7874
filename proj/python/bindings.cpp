#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sphflow/diagnostics.hpp"
#include "sphflow/harness.hpp"
#include "sphflow/lagrange.hpp"
#include "sphflow/represent.hpp"

namespace py = pybind11;
using namespace sphflow;

PYBIND11_MODULE(_sphflow, m) {
    m.doc() = "Spherically symmetric compressible heat-conductive flow in "
              "Lagrangian mass coordinates: solver, functionals and monitors.";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

    py::class_<PhysParams>(m, "PhysParams")
        .def(py::init<>())
        .def_readwrite("mu", &PhysParams::mu)
        .def_readwrite("lambda_", &PhysParams::lambda)
        .def_readwrite("kappa", &PhysParams::kappa)
        .def_readwrite("gas_r", &PhysParams::gasR)
        .def_readwrite("c_v", &PhysParams::cV)
        .def_readwrite("dim", &PhysParams::dim)
        .def_readwrite("ball_radius", &PhysParams::ballRadius)
        .def_property_readonly("nu", &PhysParams::nu);

    py::class_<MassGrid>(m, "MassGrid")
        .def_static("uniform", &MassGrid::uniform, py::arg("cells"))
        .def_static("from_nodes", &MassGrid::fromNodes, py::arg("nodes"))
        .def_readonly("node_coords", &MassGrid::nodeCoords)
        .def_readonly("cell_widths", &MassGrid::cellWidths)
        .def_property_readonly("cells", &MassGrid::cells);

    py::class_<FluidState>(m, "FluidState")
        .def(py::init<>())
        .def_readwrite("time", &FluidState::time)
        .def_readwrite("shell_volume", &FluidState::shellVolume)
        .def_readwrite("velocity", &FluidState::velocity)
        .def_readwrite("temperature", &FluidState::temperature)
        .def_readwrite("radii", &FluidState::radii);

    py::class_<RadialProfile>(m, "RadialProfile")
        .def(py::init<>())
        .def_readwrite("radii", &RadialProfile::radii)
        .def_readwrite("density", &RadialProfile::density)
        .def_readwrite("velocity", &RadialProfile::velocity)
        .def_readwrite("temperature", &RadialProfile::temperature);

    py::class_<SchemeConfig>(m, "SchemeConfig")
        .def(py::init<>())
        .def_readwrite("theta_implicit", &SchemeConfig::thetaImplicit)
        .def_readwrite("cfl_safety", &SchemeConfig::cflSafety)
        .def_readwrite("dt_min", &SchemeConfig::dtMin)
        .def_readwrite("dt_max", &SchemeConfig::dtMax)
        .def_readwrite("positivity_floor", &SchemeConfig::positivityFloor);

    py::class_<MonitorConfig>(m, "MonitorConfig")
        .def(py::init<>())
        .def_readwrite("core_mass", &MonitorConfig::coreMass)
        .def_readwrite("interior_mass", &MonitorConfig::interiorMass)
        .def_readwrite("serrin_r", &MonitorConfig::serrinR)
        .def_readwrite("serrin_s", &MonitorConfig::serrinS)
        .def_readwrite("window_start", &MonitorConfig::windowStart);

    m.def("validate_params", &validate_params);
    m.def("validate_state", &validate_state);
    m.def("equilibrium_state", &equilibrium_state, py::arg("grid"),
          py::arg("ball_radius"));

    m.def("to_lagrangian", &to_lagrangian, py::arg("profile"), py::arg("grid"),
          py::arg("auto_normalize") = true);
    m.def("to_eulerian", &to_eulerian);
    m.def("reconstruct_radii", &reconstruct_radii);

    m.def("continuity_rhs", &continuity_rhs);
    m.def("momentum_rhs", &momentum_rhs);
    m.def("temperature_rhs", &temperature_rhs);
    m.def(
        "step",
        [](const FluidState& s, const MassGrid& g, const PhysParams& p,
           const SchemeConfig& cfg, double dt) -> py::object {
            StepResult res = step(s, g, p, cfg, dt);
            if (!res.ok()) return py::none();
            return py::cast(*res.state);
        },
        py::arg("state"), py::arg("grid"), py::arg("params"), py::arg("config"),
        py::arg("dt"),
        "One step of the scheme; returns None when positivity rejects it.");
    m.def("adaptive_dt", &adaptive_dt);

    m.def("energy_functional", &energy_functional);
    m.def("dissipation_functional", &dissipation_functional);
    m.def("simple_energy", &simple_energy);
    m.def("mean_temperature", &mean_temperature);
    m.def("mass_shell", &mass_shell);
    m.def("jensen_margin_min", &jensen_margin_min);
    m.def("sigma_field", &sigma_field);
    m.def("boundary_flux_term", &boundary_flux_term);
    m.def(
        "blowup_monitor",
        [](const FluidState& s, const MassGrid& g, const MonitorConfig& cfg) {
            auto mon = blowup_monitor(s, g, cfg);
            return py::make_tuple(mon.total, mon.maxRho, mon.maxInvRho,
                                  mon.maxSpeed);
        },
        "Core supremum of rho + 1/rho + |u| and its three components.");

    m.def(
        "run_simulation",
        [](const std::string& configJson, const std::string& outDir) {
            RunOutput out = run_simulation(scenario_from_json(configJson));
            std::string series;
            if (!outDir.empty()) series = write_outputs(out, outDir);
            py::dict d;
            d["termination"] = termination_name(out.summary.termination);
            d["final_time"] = out.summary.finalTime;
            d["steps"] = out.summary.steps;
            d["peak_monitor_total"] = out.summary.peakMonitorTotal;
            d["peak_max_inv_rho"] = out.summary.peakMaxInvRho;
            d["mass_drift_rel"] = out.summary.massDriftRel;
            d["simple_energy_drift_rel"] = out.summary.simpleEnergyDriftRel;
            d["final_entropy_residual"] = out.summary.finalEntropyResidual;
            d["min_jensen_margin"] = out.summary.minJensenMargin;
            d["recon_residual_max"] = out.summary.reconResidualMax;
            d["series_path"] = series;
            return d;
        },
        py::arg("config_json"), py::arg("out_dir") = std::string(),
        "Run a scenario from its JSON config; optionally write outputs.");
    m.def("check_series", &check_series, py::arg("series_path"),
          py::arg("simple_energy_tol") = 1e-3);
    m.def("scenario_defaults",
          []() { return scenario_to_json(ScenarioConfig{}); });
}
