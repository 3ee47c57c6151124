#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nsdv/model.hpp"
#include "nsdv/solver.hpp"

namespace nsdv {

/// Bit flags raised by the monitors at a given output time.
enum MonitorFlag : std::uint32_t {
  kFlagEnergy = 1u << 0,
  kFlagBd = 1u << 1,
  kFlagYEnvelope = 1u << 2,
  kFlagOleinik = 1u << 3,
  kFlagVacuum = 1u << 4,
  kFlagW1Sign = 1u << 5,
  kFlagBlowUp = 1u << 6,
};

/// "energy+bd" style rendering; "none" for an empty mask.
std::string flag_string(std::uint32_t mask);

struct DiagnosticSeries {
  std::vector<double> times;
  std::vector<double> energy;
  std::vector<double> energy_diss;
  std::vector<double> bd_entropy;
  std::vector<double> bd_diss;
  std::vector<double> hoff_A;
  std::vector<double> hoff_B;
  std::vector<double> y_max;
  /// NaN where the envelope is not available (gamma = alpha + 1).
  std::vector<double> y_env;
  std::vector<double> oleinik_slope;
  std::vector<double> oleinik_envelope;
  std::vector<double> inv_rho_max;
  std::vector<double> rho_max;
  std::vector<double> bv_norm_v;
  std::vector<double> w1_max;
  /// Vacuum comparison solution; NaN unless gamma < alpha + 1.
  std::vector<double> z_comparison;
  std::vector<std::uint32_t> flags;

  bool y_env_available = false;
  bool vacuum_comparison_available = false;
  bool w1_sign_checked = false;
  double tolerance = 0.0;

  std::uint32_t all_flags() const;
  bool any_violation() const { return all_flags() != 0; }
};

/// Instantaneous energy sum(rho u^2 / 2 + Pi_rel(rho)) dx.
double energy(const FluidState& s, const Grid1D& g, const ModelParams& p);
/// sum mu(rho) (d_x u)^2 dx.
double energy_dissipation(const FluidState& s, const Grid1D& g,
                          const ModelParams& p);
/// sum(rho v^2 / 2 + Pi_rel(rho)) dx.
double bd_entropy(const FluidState& s, const Grid1D& g, const ModelParams& p);
/// sum mu(rho) P'(rho) (d_x rho)^2 / rho^2 dx.
double bd_dissipation(const FluidState& s, const Grid1D& g,
                      const ModelParams& p);

/// Discrete total variation of v over nodes with |x| <= half_window.
/// Throws InputError when the window exceeds the domain.
double bv_norm(std::span<const double> v, const Grid1D& g, double half_window);

/// sigma(t) = min(1, t).
double sigma_weight(double t);

/// Hoff functionals at every snapshot time, left-rectangle time quadrature.
std::vector<double> hoff_A(const Trajectory& tr);
std::vector<double> hoff_B(const Trajectory& tr);

struct YEnvelope {
  bool available = false;
  double c_gamma = 0.0;
  double y_m0 = 0.0;
  std::vector<double> times;
  std::vector<double> y_env;
};

/// y_env(t) = y_M(0) + C_gamma int_0^t max(rho)^(2 gamma - 2 alpha - 1),
/// C_gamma = max(0, gamma^2 / (gamma - alpha - 1)). Withheld on the log branch.
YEnvelope y_comparison_ode(const Trajectory& tr);

/// Solution of z' = c(t) + gamma/(alpha + 1 - gamma) z^(alpha + 1 - gamma),
/// z(0) = z0, at `times` with c piecewise linear. Requires gamma < alpha + 1.
std::vector<double> vacuum_comparison(std::span<const double> times,
                                      std::span<const double> c, double z0,
                                      const ModelParams& p);

/// True when alpha > 1, alpha <= gamma <= alpha + 1 and d_x u0 <= rho0^(gamma - alpha).
bool constantin_condition(const FluidState& initial, const Grid1D& g,
                          const ModelParams& p);

struct MonitorOptions {
  /// Tolerance multiplier on dx.
  double tol_dx_factor = 10.0;
  /// Relative slack on the energy and BD balances.
  double balance_rel = 1e-3;
  /// Half-width of the BV window; <= 0 means the full domain.
  double bv_half_window = 0.0;
};

/// Full monitor suite over a trajectory.
DiagnosticSeries evaluate_monitors(const Trajectory& tr,
                                   const MonitorOptions& opt = {});

struct TwinReport {
  double epsilon = 0.0;
  double kappa = 0.0;
  std::vector<double> times;
  /// ||du(t)||_{L2} in label coordinates.
  std::vector<double> du_l2;
  /// ||sqrt(rho0) du(t)||_{L2}.
  std::vector<double> du_weighted;
  /// int_0^t ||d_x du||^2.
  std::vector<double> dissipation;
  std::vector<double> lhs;
  std::vector<double> rhs;
  /// Empirical K(t) = (1/kappa) int int G^2 / (t int ||d_x du||^2).
  std::vector<double> k_factor;
  /// First time with t K(t) >= kappa / 2; t_end when never reached.
  double crossing_time = 0.0;
  bool gronwall_holds = true;
};

/// Runs the base and u0-perturbed problems concurrently, pulls both back
/// with their own flow maps and checks the difference energy inequality.
TwinReport twin_run_stability(const FluidState& initial, const SolverConfig& cfg,
                              const Grid1D& g, const ModelParams& p,
                              double epsilon);

}  // namespace nsdv
