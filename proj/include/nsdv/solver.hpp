#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "nsdv/model.hpp"

namespace nsdv {

enum class Formulation { Primitive, Effective };
enum class DiffusionTreatment { Explicit, SemiImplicit };

struct SolverConfig {
  double cfl_number = 0.4;
  double t_end = 1.0;
  Formulation formulation = Formulation::Primitive;
  DiffusionTreatment diffusion = DiffusionTreatment::SemiImplicit;
  double output_cadence = 0.1;
  /// Overrides the adaptive step. Steps above the stability limit are allowed
  /// and any resulting breakdown is reported as NumericalFailure.
  std::optional<double> fixed_dt;
  /// When set, the step is dt_over_dx2 * dx^2, still capped by stable_dt.
  std::optional<double> dt_over_dx2;

  /// Throws ConfigError on violated invariants.
  void validate() const;

  bool operator==(const SolverConfig&) const = default;
};

struct BoundaryValues {
  double rho_left = kFarFieldDensity;
  double u_left = kFarFieldVelocity;
  double rho_right = kFarFieldDensity;
  double u_right = kFarFieldVelocity;
};

/// Source terms added to the mass and (conservative) momentum equations,
/// plus time-dependent Dirichlet data. Used by manufactured-solution runs.
class ExternalForcing {
 public:
  virtual ~ExternalForcing() = default;
  virtual void source(double t, const Grid1D& g, const ModelParams& p,
                      std::vector<double>& mass,
                      std::vector<double>& momentum) const = 0;
  virtual BoundaryValues boundary(double t, const Grid1D& g,
                                  const ModelParams& p) const = 0;
};

double stable_dt(const FluidState& s, const Grid1D& g, const SolverConfig& cfg,
                 const ModelParams& p);

/// One conservative step of the primitive system. Throws VacuumBlowUp when the
/// density reaches kRhoFloor and NumericalFailure on non-finite values.
FluidState step_primitive(const FluidState& s, double dt, const Grid1D& g,
                          const SolverConfig& cfg, const ModelParams& p,
                          const ExternalForcing* forcing = nullptr);

/// (rho, v) state of the effective-velocity formulation.
struct EffectiveState {
  double time = 0.0;
  std::vector<double> rho;
  std::vector<double> v;
};

/// Test switches for isolating the damping term.
struct EffectiveStepOptions {
  bool freeze_density = false;
  bool zero_velocity = false;
};

EffectiveState to_effective(const FluidState& s, const Grid1D& g,
                            const ModelParams& p);
FluidState from_effective(const EffectiveState& s, const Grid1D& g,
                          const ModelParams& p);

EffectiveState step_effective(const EffectiveState& s, double dt,
                              const Grid1D& g, const SolverConfig& cfg,
                              const ModelParams& p,
                              const EffectiveStepOptions& opt = {});

/// Time integrals accumulated step by step (trapezoid rule).
struct StepIntegrals {
  double energy_dissipation = 0.0;  ///< int mu(rho) u_x^2
  double bd_dissipation = 0.0;      ///< int mu(rho) P'(rho) rho_x^2 / rho^2
  double rho_max_power = 0.0;       ///< int max(rho)^(2 gamma - 2 alpha - 1)
};

struct BlowUpInfo {
  double time = 0.0;
  std::size_t node = 0;
  double rho = 0.0;
};

struct Trajectory {
  ModelParams params;
  Grid1D grid;
  std::vector<FluidState> snapshots;
  /// Cumulative integrals from t = 0 to each snapshot time.
  std::vector<StepIntegrals> integrals;
  std::size_t steps = 0;
  double max_dt = 0.0;
  std::optional<BlowUpInfo> blowup;
};

/// Integrates to cfg.t_end, storing snapshots at every multiple of the output
/// cadence. A vacuum blow-up ends the run early with `blowup` set.
Trajectory run(const FluidState& initial, const SolverConfig& cfg,
               const Grid1D& g, const ModelParams& p,
               const ExternalForcing* forcing = nullptr);

}  // namespace nsdv
