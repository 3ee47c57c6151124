#include "nsdv/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsdv/errors.hpp"

namespace nsdv {

namespace {

void require_positive(double rho, const char* what) {
  if (!(rho > 0.0)) {
    std::ostringstream os;
    os << what << ": density must be positive, got " << rho;
    throw DomainError(os.str());
  }
}

}  // namespace

ModelParams::ModelParams(double alpha, double gamma, double half_length)
    : alpha_(alpha),
      gamma_(gamma),
      half_length_(half_length),
      log_branch_(std::abs(gamma - alpha - 1.0) <= kLogBranchTolerance) {}

ModelParams ModelParams::create(double alpha, double gamma,
                                double half_length) {
  if (!(alpha > 0.5))
    throw ConfigError("alpha must exceed 1/2, got " + std::to_string(alpha));
  if (!(gamma >= std::max(1.0, alpha)))
    throw ConfigError("gamma must be >= max(1, alpha), got " +
                      std::to_string(gamma));
  if (!(half_length > 0.0) || !std::isfinite(half_length))
    throw ConfigError("half_length must be positive and finite");
  return ModelParams(alpha, gamma, half_length);
}

std::vector<std::string> ModelParams::warnings() const {
  std::vector<std::string> out;
  const double gap = std::abs(gamma_ - alpha_ - 1.0);
  if (!log_branch_ && gap < 1e-6) {
    std::ostringstream os;
    os << "gamma - alpha - 1 = " << (gamma_ - alpha_ - 1.0)
       << " is nearly zero; the F2 coefficient gamma/(gamma-alpha-1) is "
          "ill-conditioned";
    out.push_back(os.str());
  }
  return out;
}

Grid1D::Grid1D(std::size_t n_cells, double half_length)
    : half_length_(half_length) {
  if (n_cells < 5) throw ConfigError("grid needs at least 5 nodes");
  if (!(half_length > 0.0)) throw ConfigError("grid half_length must be > 0");
  dx_ = 2.0 * half_length / static_cast<double>(n_cells - 1);
  coords_.resize(n_cells);
  for (std::size_t i = 0; i < n_cells; ++i)
    coords_[i] = -half_length + static_cast<double>(i) * dx_;
  coords_.back() = half_length;
}

FluidState equilibrium_state(const Grid1D& grid, double time) {
  return FluidState{time, std::vector<double>(grid.size(), kFarFieldDensity),
                    std::vector<double>(grid.size(), kFarFieldVelocity)};
}

void check_state(const FluidState& state, const Grid1D& grid) {
  if (state.rho.size() != grid.size() || state.u.size() != grid.size())
    throw ShapeError("state length does not match grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(state.rho[i] > 0.0))
      throw DomainError("vacuum or invalid density at node " +
                        std::to_string(i));
    if (!std::isfinite(state.u[i]) || !std::isfinite(state.rho[i]))
      throw DomainError("non-finite value at node " + std::to_string(i));
  }
}

double pressure(double rho, const ModelParams& p) {
  require_positive(rho, "pressure");
  return std::pow(rho, p.gamma());
}

double viscosity(double rho, const ModelParams& p) {
  require_positive(rho, "viscosity");
  return std::pow(rho, p.alpha());
}

double f1(double rho, const ModelParams& p) {
  require_positive(rho, "f1");
  return p.gamma() * std::pow(rho, p.gamma() - p.alpha());
}

double f2(double rho, const ModelParams& p) {
  require_positive(rho, "f2");
  if (p.log_branch()) return p.gamma() * std::log(rho);
  const double e = p.gamma() - p.alpha() - 1.0;
  return p.gamma() / e * std::pow(rho, e);
}

double f1f2(double rho, const ModelParams& p) {
  require_positive(rho, "f1f2");
  const double g = p.gamma();
  if (p.log_branch()) return g * g * std::log(rho) * std::pow(rho, g - p.alpha());
  const double e = g - p.alpha() - 1.0;
  return g * g / e * std::pow(rho, 2.0 * g - 2.0 * p.alpha() - 1.0);
}

double f1prime_rho_over_mu(double rho, const ModelParams& p) {
  require_positive(rho, "f1prime_rho_over_mu");
  const double d = p.gamma() - p.alpha();
  if (d == 0.0) return 0.0;
  return p.gamma() * d * std::pow(rho, p.gamma() - 2.0 * p.alpha());
}

double phi(double rho, const ModelParams& p) {
  require_positive(rho, "phi");
  if (p.alpha() == 1.0) return std::log(rho);
  return std::pow(rho, p.alpha() - 1.0) / (p.alpha() - 1.0);
}

double internal_energy(double rho, const ModelParams& p) {
  require_positive(rho, "internal_energy");
  const double g = p.gamma();
  if (g == 1.0) return rho * std::log(rho) - rho + 1.0;
  // rho^g/(g-1) - 1/(g-1) - g/(g-1) (rho - 1)
  return (std::pow(rho, g) - 1.0 - g * (rho - 1.0)) / (g - 1.0);
}

double sound_speed(double rho, const ModelParams& p) {
  require_positive(rho, "sound_speed");
  return std::sqrt(p.gamma() * std::pow(rho, p.gamma() - 1.0));
}

std::vector<double> ddx(std::span<const double> f, const Grid1D& grid) {
  const std::size_t n = grid.size();
  if (f.size() != n) throw ShapeError("ddx: field length does not match grid");
  const double inv2dx = 0.5 / grid.dx();
  std::vector<double> out(n);
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (f[i + 1] - f[i - 1]) * inv2dx;
  out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2dx;
  out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv2dx;
  return out;
}

std::vector<double> ddx_upwind(std::span<const double> f,
                               std::span<const double> a, const Grid1D& grid) {
  const std::size_t n = grid.size();
  if (f.size() != n || a.size() != n)
    throw ShapeError("ddx_upwind: field length does not match grid");
  const double dx = grid.dx();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] >= 0.0) {
      if (i >= 2)
        out[i] = (3.0 * f[i] - 4.0 * f[i - 1] + f[i - 2]) / (2.0 * dx);
      else if (i == 1)
        out[i] = (f[1] - f[0]) / dx;
      else
        out[i] = (f[1] - f[0]) / dx;
    } else {
      if (i + 2 < n)
        out[i] = (-3.0 * f[i] + 4.0 * f[i + 1] - f[i + 2]) / (2.0 * dx);
      else if (i + 1 < n)
        out[i] = (f[i + 1] - f[i]) / dx;
      else
        out[i] = (f[i] - f[i - 1]) / dx;
    }
  }
  return out;
}

}  // namespace nsdv
