#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace nsdv {

inline constexpr double kFarFieldDensity = 1.0;
inline constexpr double kFarFieldVelocity = 0.0;

/// Density at or below which a run is declared blown up. Never clamped.
inline constexpr double kRhoFloor = 1e-10;

/// Tolerance on |gamma - alpha - 1| selecting the logarithmic F2 branch.
inline constexpr double kLogBranchTolerance = 1e-12;

/// Exponents of P(rho) = rho^gamma and mu(rho) = rho^alpha on [-L, L].
///
/// The far-field state is fixed at (rho, u) = (1, 0).
class ModelParams {
 public:
  /// Throws ConfigError unless alpha > 1/2, gamma >= max(1, alpha), L > 0.
  static ModelParams create(double alpha, double gamma, double half_length);

  double alpha() const { return alpha_; }
  double gamma() const { return gamma_; }
  double half_length() const { return half_length_; }
  double farfield_density() const { return kFarFieldDensity; }
  double farfield_velocity() const { return kFarFieldVelocity; }

  /// True when gamma == alpha + 1 within kLogBranchTolerance.
  bool log_branch() const { return log_branch_; }

  /// Human-readable conditioning warnings (near-degenerate gamma - alpha - 1).
  std::vector<std::string> warnings() const;

  bool operator==(const ModelParams&) const = default;

 private:
  ModelParams(double alpha, double gamma, double half_length);

  double alpha_;
  double gamma_;
  double half_length_;
  bool log_branch_;
};

/// Uniform node-centred grid on [-L, L]; nodes 0 and n-1 sit on the boundary.
class Grid1D {
 public:
  Grid1D(std::size_t n_cells, double half_length);

  std::size_t n_cells() const { return coords_.size(); }
  std::size_t size() const { return coords_.size(); }
  double dx() const { return dx_; }
  double half_length() const { return half_length_; }
  const std::vector<double>& coords() const { return coords_; }
  double x(std::size_t i) const { return coords_[i]; }

  bool operator==(const Grid1D& o) const {
    return coords_.size() == o.coords_.size() && half_length_ == o.half_length_;
  }

 private:
  double half_length_;
  double dx_;
  std::vector<double> coords_;
};

/// Density and velocity sampled on a Grid1D at one instant.
struct FluidState {
  double time = 0.0;
  std::vector<double> rho;
  std::vector<double> u;
};

/// Equilibrium state (1, 0) on the grid.
FluidState equilibrium_state(const Grid1D& grid, double time = 0.0);

/// Throws ShapeError on length mismatch and DomainError on rho <= 0 or NaN.
void check_state(const FluidState& state, const Grid1D& grid);

// Constitutive laws. Every function throws DomainError for rho <= 0.

double pressure(double rho, const ModelParams& p);
double viscosity(double rho, const ModelParams& p);
/// F1(rho) = gamma rho^(gamma - alpha), the damping rate of v - u.
double f1(double rho, const ModelParams& p);
/// F2 with rho F2'(rho) = F1(rho)/rho; logarithmic when gamma = alpha + 1.
double f2(double rho, const ModelParams& p);
double f1f2(double rho, const ModelParams& p);
/// F1'(rho) rho / mu(rho).
double f1prime_rho_over_mu(double rho, const ModelParams& p);
/// Antiderivative of mu(s)/s^2.
double phi(double rho, const ModelParams& p);
/// Pi(rho) - Pi(1) - Pi'(1)(rho - 1), with rho Pi'' = P'.
double internal_energy(double rho, const ModelParams& p);
/// sqrt(P'(rho)).
double sound_speed(double rho, const ModelParams& p);

/// Second-order central derivative; one-sided second order at both ends.
std::vector<double> ddx(std::span<const double> field, const Grid1D& grid);

/// Second-order upwind derivative, the stencil chosen by the sign of
/// `velocity` at each node. Falls back to first order next to the boundary.
std::vector<double> ddx_upwind(std::span<const double> field,
                               std::span<const double> velocity,
                               const Grid1D& grid);

/// Applies `fn(rho, p)` node-wise.
template <class Fn>
std::vector<double> map_density(std::span<const double> rho,
                                const ModelParams& p, Fn fn) {
  std::vector<double> out(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) out[i] = fn(rho[i], p);
  return out;
}

}  // namespace nsdv
