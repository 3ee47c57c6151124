#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nsdv/config.hpp"
#include "nsdv/diagnostics.hpp"
#include "nsdv/effective.hpp"
#include "nsdv/errors.hpp"
#include "nsdv/initdata.hpp"
#include "nsdv/lagrangian.hpp"
#include "nsdv/model.hpp"
#include "nsdv/solver.hpp"
#include "nsdv/studies.hpp"

namespace py = pybind11;
using namespace nsdv;

namespace {

template <class F>
std::vector<double> map_rho(const std::vector<double>& rho, const ModelParams& p, F f) {
  std::vector<double> out(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) out[i] = f(rho[i], p);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "1D compressible Navier-Stokes with rho^alpha viscosity: solvers and diagnostics";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ShapeError>(m, "ShapeError", base.ptr());
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<NumericalFailure>(m, "NumericalFailure", base.ptr());
  py::register_exception<VacuumBlowUp>(m, "VacuumBlowUp", base.ptr());
  py::register_exception<HomeomorphismViolation>(m, "HomeomorphismViolation", base.ptr());
  py::register_exception<DomainExit>(m, "DomainExit", base.ptr());

  m.attr("RHO_FLOOR") = kRhoFloor;

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init(&ModelParams::create), py::arg("alpha"), py::arg("gamma"),
           py::arg("half_length") = 10.0)
      .def_property_readonly("alpha", &ModelParams::alpha)
      .def_property_readonly("gamma", &ModelParams::gamma)
      .def_property_readonly("half_length", &ModelParams::half_length)
      .def_property_readonly("log_branch", &ModelParams::log_branch)
      .def("warnings", &ModelParams::warnings)
      .def(py::self == py::self)
      .def("__repr__", [](const ModelParams& p) {
        return "ModelParams(alpha=" + std::to_string(p.alpha()) +
               ", gamma=" + std::to_string(p.gamma()) +
               ", half_length=" + std::to_string(p.half_length()) + ")";
      });

  py::class_<Grid1D>(m, "Grid1D")
      .def(py::init<std::size_t, double>(), py::arg("n"), py::arg("half_length"))
      .def_property_readonly("size", &Grid1D::size)
      .def_property_readonly("dx", &Grid1D::dx)
      .def_property_readonly("half_length", &Grid1D::half_length)
      .def_property_readonly("x", &Grid1D::coords);

  py::class_<FluidState>(m, "FluidState")
      .def(py::init<>())
      .def(py::init([](double t, std::vector<double> rho, std::vector<double> u) {
             return FluidState{t, std::move(rho), std::move(u)};
           }),
           py::arg("time"), py::arg("rho"), py::arg("u"))
      .def_readwrite("time", &FluidState::time)
      .def_readwrite("rho", &FluidState::rho)
      .def_readwrite("u", &FluidState::u);

  m.def("equilibrium_state", &equilibrium_state, py::arg("grid"), py::arg("time") = 0.0);
  m.def("check_state", &check_state);

  m.def("pressure", &pressure);
  m.def("viscosity", &viscosity);
  m.def("f1", &f1);
  m.def("f2", &f2);
  m.def("f1f2", &f1f2);
  m.def("f1prime_rho_over_mu", &f1prime_rho_over_mu);
  m.def("phi", &phi);
  m.def("internal_energy", &internal_energy);
  m.def("sound_speed", &sound_speed);
  m.def("pressure_field", [](const std::vector<double>& r, const ModelParams& p) {
    return map_rho(r, p, pressure);
  });
  m.def("f2_field", [](const std::vector<double>& r, const ModelParams& p) {
    return map_rho(r, p, f2);
  });
  m.def("ddx", [](const std::vector<double>& f, const Grid1D& g) { return ddx(f, g); });

  py::class_<EffectiveFields>(m, "EffectiveFields")
      .def_readonly("v", &EffectiveFields::v)
      .def_readonly("w1", &EffectiveFields::w1)
      .def_readonly("y", &EffectiveFields::y)
      .def_readonly("udot", &EffectiveFields::udot);
  m.def("effective_velocity", &effective_velocity);
  m.def("effective_flux", &effective_flux);
  m.def("effective_pressure", &effective_pressure);
  m.def("convective_derivative", &convective_derivative);
  m.def("effective_fields", &effective_fields);

  py::enum_<Formulation>(m, "Formulation")
      .value("PRIMITIVE", Formulation::Primitive)
      .value("EFFECTIVE", Formulation::Effective);
  py::enum_<DiffusionTreatment>(m, "DiffusionTreatment")
      .value("EXPLICIT", DiffusionTreatment::Explicit)
      .value("SEMI_IMPLICIT", DiffusionTreatment::SemiImplicit);

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("cfl_number", &SolverConfig::cfl_number)
      .def_readwrite("t_end", &SolverConfig::t_end)
      .def_readwrite("formulation", &SolverConfig::formulation)
      .def_readwrite("diffusion", &SolverConfig::diffusion)
      .def_readwrite("output_cadence", &SolverConfig::output_cadence)
      .def_readwrite("fixed_dt", &SolverConfig::fixed_dt)
      .def_readwrite("dt_over_dx2", &SolverConfig::dt_over_dx2)
      .def("validate", &SolverConfig::validate);

  m.def("stable_dt", &stable_dt);
  m.def("step_primitive",
        [](const FluidState& s, double dt, const Grid1D& g, const SolverConfig& c,
           const ModelParams& p) { return step_primitive(s, dt, g, c, p); });

  py::class_<StepIntegrals>(m, "StepIntegrals")
      .def_readonly("energy_dissipation", &StepIntegrals::energy_dissipation)
      .def_readonly("bd_dissipation", &StepIntegrals::bd_dissipation)
      .def_readonly("rho_max_power", &StepIntegrals::rho_max_power);
  py::class_<BlowUpInfo>(m, "BlowUpInfo")
      .def_readonly("time", &BlowUpInfo::time)
      .def_readonly("node", &BlowUpInfo::node)
      .def_readonly("rho", &BlowUpInfo::rho);
  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("params", &Trajectory::params)
      .def_readonly("grid", &Trajectory::grid)
      .def_readonly("snapshots", &Trajectory::snapshots)
      .def_readonly("integrals", &Trajectory::integrals)
      .def_readonly("steps", &Trajectory::steps)
      .def_readonly("max_dt", &Trajectory::max_dt)
      .def_readonly("blowup", &Trajectory::blowup);

  m.def("run", [](const FluidState& s, const SolverConfig& c, const Grid1D& g,
                  const ModelParams& p) { return run(s, c, g, p); },
        py::arg("initial"), py::arg("config"), py::arg("grid"), py::arg("params"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<LagrangianRun>(m, "LagrangianRun")
      .def_readonly("eulerian", &LagrangianRun::eulerian)
      .def_readonly("min_jacobian", &LagrangianRun::min_jacobian)
      .def_readonly("jacobian_bounds_hold", &LagrangianRun::jacobian_bounds_hold);
  m.def("run_lagrangian", &run_lagrangian, py::call_guard<py::gil_scoped_release>());

  py::class_<DiagnosticSeries>(m, "DiagnosticSeries")
      .def_readonly("times", &DiagnosticSeries::times)
      .def_readonly("energy", &DiagnosticSeries::energy)
      .def_readonly("energy_diss", &DiagnosticSeries::energy_diss)
      .def_readonly("bd_entropy", &DiagnosticSeries::bd_entropy)
      .def_readonly("bd_diss", &DiagnosticSeries::bd_diss)
      .def_readonly("hoff_A", &DiagnosticSeries::hoff_A)
      .def_readonly("hoff_B", &DiagnosticSeries::hoff_B)
      .def_readonly("y_max", &DiagnosticSeries::y_max)
      .def_readonly("y_env", &DiagnosticSeries::y_env)
      .def_readonly("oleinik_slope", &DiagnosticSeries::oleinik_slope)
      .def_readonly("oleinik_envelope", &DiagnosticSeries::oleinik_envelope)
      .def_readonly("inv_rho_max", &DiagnosticSeries::inv_rho_max)
      .def_readonly("rho_max", &DiagnosticSeries::rho_max)
      .def_readonly("bv_norm_v", &DiagnosticSeries::bv_norm_v)
      .def_readonly("w1_max", &DiagnosticSeries::w1_max)
      .def_readonly("z_comparison", &DiagnosticSeries::z_comparison)
      .def_readonly("flags", &DiagnosticSeries::flags)
      .def_readonly("tolerance", &DiagnosticSeries::tolerance)
      .def("all_flags", &DiagnosticSeries::all_flags)
      .def("any_violation", &DiagnosticSeries::any_violation);

  m.def("energy", &energy);
  m.def("bd_entropy", &bd_entropy);
  m.def("flag_string", &flag_string);
  m.def("evaluate_monitors", [](const Trajectory& tr) { return evaluate_monitors(tr); });

  py::class_<TwinReport>(m, "TwinReport")
      .def_readonly("epsilon", &TwinReport::epsilon)
      .def_readonly("times", &TwinReport::times)
      .def_readonly("du_l2", &TwinReport::du_l2)
      .def_readonly("lhs", &TwinReport::lhs)
      .def_readonly("rhs", &TwinReport::rhs)
      .def_readonly("k_factor", &TwinReport::k_factor)
      .def_readonly("crossing_time", &TwinReport::crossing_time)
      .def_readonly("gronwall_holds", &TwinReport::gronwall_holds);
  m.def("twin_run_stability", &twin_run_stability, py::call_guard<py::gil_scoped_release>());

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def_readwrite("alpha", &ScenarioConfig::alpha)
      .def_readwrite("gamma", &ScenarioConfig::gamma)
      .def_readwrite("half_length", &ScenarioConfig::half_length)
      .def_readwrite("n_cells", &ScenarioConfig::n_cells)
      .def_readwrite("solver", &ScenarioConfig::solver)
      .def_readwrite("seed", &ScenarioConfig::seed)
      .def_readwrite("noise", &ScenarioConfig::noise)
      .def_property_readonly("initial_kind",
                             [](const ScenarioConfig& c) { return initial_kind_name(c.initial); })
      .def("model", &ScenarioConfig::model)
      .def("grid", &ScenarioConfig::grid)
      .def(py::self == py::self);
  m.def("parse_config", &parse_config);
  m.def("load_config", &load_config);
  m.def("serialize_config", &serialize_config);
  m.def("config_hash", &config_hash);
  m.def("validate_config", &validate_config);

  py::class_<InitialData>(m, "InitialData")
      .def_readonly("state", &InitialData::state)
      .def_readonly("v0", &InitialData::v0)
      .def_readonly("oleinik_constant", &InitialData::oleinik_constant);
  m.def("build_initial", &build_initial);
  m.def("mollify", [](const std::vector<double>& f, int n, const Grid1D& g) {
    return mollify(f, n, g);
  });

  py::class_<ConvergenceRow>(m, "ConvergenceRow")
      .def_readonly("n", &ConvergenceRow::n)
      .def_readonly("dx", &ConvergenceRow::dx)
      .def_readonly("error", &ConvergenceRow::error)
      .def_readonly("order", &ConvergenceRow::order);
  py::class_<ConvergenceTable>(m, "ConvergenceTable")
      .def_readonly("rows", &ConvergenceTable::rows)
      .def("min_order", &ConvergenceTable::min_order)
      .def("monotone", &ConvergenceTable::monotone);
  m.def("mms_convergence",
        [](const std::string& id, int levels, const std::string& mode) {
          if (mode != "cfl" && mode != "dx2") throw ConfigError("mode must be cfl or dx2");
          return mms_convergence(id, levels, mode == "cfl" ? DtMode::Cfl : DtMode::DxSquared);
        },
        py::arg("id"), py::arg("levels"), py::arg("mode") = "dx2",
        py::call_guard<py::gil_scoped_release>());
}
