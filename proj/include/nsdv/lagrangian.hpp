#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "nsdv/model.hpp"
#include "nsdv/solver.hpp"

namespace nsdv {

/// Velocity field u(t, x) and its gradient, evaluable anywhere in the run.
struct VelocitySampler {
  std::function<double(double, double)> u;
  std::function<double(double, double)> dudx;
  /// Particles leaving [-L, L] raise DomainExit when set.
  bool check_domain = true;
};

/// Linear interpolation in time between snapshots and in space between nodes.
VelocitySampler sampler_from_trajectory(const Trajectory& tr);

/// X(t, .) and its Jacobian sampled on the Lagrangian (label) grid.
struct FlowMap {
  std::vector<double> times;
  std::vector<std::vector<double>> x_map;
  /// Central difference of x_map.
  std::vector<std::vector<double>> jacobian;
  /// exp of the time integral of d_x u along each trajectory.
  std::vector<std::vector<double>> jacobian_exp;
  /// max over times and interior nodes of |jacobian - jacobian_exp|.
  double jacobian_discrepancy = 0.0;
};

/// RK2 integration of dX/dt = u(t, X) from X(0, x) = x, recorded at `times`
/// (times[0] must be 0) with `substeps` RK2 steps per interval.
FlowMap integrate_flow(const VelocitySampler& sampler, const Grid1D& g,
                       std::span<const double> times, std::size_t substeps = 8);

/// Flow map of a trajectory recorded at its snapshot times.
FlowMap integrate_flow(const Trajectory& tr, std::size_t substeps = 8);

/// Index of `t` in flow.times (tolerance 1e-9); throws InputError otherwise.
std::size_t flow_time_index(const FlowMap& flow, double t);

/// f(X(t, x)) on the label grid. Throws HomeomorphismViolation on a
/// non-monotone map.
std::vector<double> to_lagrangian(std::span<const double> field,
                                  const FlowMap& flow, double t,
                                  const Grid1D& g);
/// Inverse of to_lagrangian, with X^-1 found by binary search.
std::vector<double> to_eulerian(std::span<const double> field,
                                const FlowMap& flow, double t, const Grid1D& g);

/// rho0 / d_x X at time t. Throws HomeomorphismViolation when d_x X <= 0.
std::vector<double> lagrangian_density(const FlowMap& flow,
                                       std::span<const double> rho0, double t);

/// Staggered Lagrangian state: velocity and positions at label nodes,
/// Jacobian and density on the n - 1 cells between them.
struct LagrangianState {
  double time = 0.0;
  std::vector<double> u;
  std::vector<double> x;
  std::vector<double> jac;
  std::vector<double> rho;
};

LagrangianState lagrangian_initial(const FluidState& s, const Grid1D& g);
/// Cell-centred reference density rho0 of an initial state.
std::vector<double> cell_density(const FluidState& s);

/// One step: implicit viscosity in u (tridiagonal, coefficient
/// rho mu(rho) / rho0), explicit pressure, then d_t J = d_x u and
/// rho = rho0 / J.
LagrangianState step_lagrangian(const LagrangianState& s, double dt,
                                std::span<const double> rho0_cells,
                                const Grid1D& g, const ModelParams& p);

/// Pushes a Lagrangian state to the Eulerian grid.
FluidState lagrangian_to_eulerian(const LagrangianState& s, const Grid1D& g);

struct LagrangianRun {
  std::vector<LagrangianState> states;
  Trajectory eulerian;
  double min_jacobian = 0.0;
  /// True while C(t)^-1 inf rho0 <= d_x X <= C(t) sup rho0 held with
  /// C(t) = max(rho) max(1/rho).
  bool jacobian_bounds_hold = true;
};

/// Integrates the Lagrangian system on the step schedule of `cfg`.
LagrangianRun run_lagrangian(const FluidState& initial, const SolverConfig& cfg,
                             const Grid1D& g, const ModelParams& p);

struct DecayReport {
  std::vector<double> times;
  /// max_x |v(t, X(t, x))| / (1 + |v0(x)|).
  std::vector<double> envelope;
  std::vector<double> v_final;
};

/// Integrates d_t v = -F1(rho)(v - u) along particle paths with an exact
/// integrating factor per interval.
DecayReport v_lagrangian_decay(const Trajectory& tr, const FlowMap& flow,
                               std::span<const double> v0);

}  // namespace nsdv
