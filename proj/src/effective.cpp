#include "nsdv/effective.hpp"

#include <algorithm>
#include <cmath>

#include "nsdv/errors.hpp"

namespace nsdv {

std::vector<double> effective_velocity(const FluidState& s, const Grid1D& g,
                                       const ModelParams& p) {
  check_state(s, g);
  const auto drho = ddx(s.rho, g);
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    v[i] = s.u[i] + viscosity(s.rho[i], p) / (s.rho[i] * s.rho[i]) * drho[i];
  return v;
}

std::vector<double> effective_flux(const FluidState& s, const Grid1D& g,
                                   const ModelParams& p) {
  check_state(s, g);
  const auto du = ddx(s.u, g);
  const double p1 = pressure(1.0, p);
  std::vector<double> w(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    w[i] = viscosity(s.rho[i], p) * du[i] - pressure(s.rho[i], p) + p1;
  return w;
}

std::vector<double> effective_pressure(const FluidState& s, const Grid1D& g,
                                       const ModelParams& p) {
  const auto v = effective_velocity(s, g, p);
  const auto dv = ddx(v, g);
  std::vector<double> y(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    y[i] = dv[i] / s.rho[i] + f2(s.rho[i], p);
  return y;
}

std::vector<double> convective_derivative(const FluidState& s, const Grid1D& g,
                                          const ModelParams& p) {
  check_state(s, g);
  const auto du = ddx(s.u, g);
  std::vector<double> flux(g.size()), pr(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    flux[i] = viscosity(s.rho[i], p) * du[i];
    pr[i] = pressure(s.rho[i], p);
  }
  const auto dflux = ddx(flux, g);
  const auto dp = ddx(pr, g);
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    out[i] = (dflux[i] - dp[i]) / s.rho[i];
  return out;
}

EffectiveFields effective_fields(const FluidState& s, const Grid1D& g,
                                 const ModelParams& p) {
  EffectiveFields f;
  f.v = effective_velocity(s, g, p);
  f.w1 = effective_flux(s, g, p);
  const auto dv = ddx(f.v, g);
  f.y.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    f.y[i] = dv[i] / s.rho[i] + f2(s.rho[i], p);
  f.udot = convective_derivative(s, g, p);
  return f;
}

YResidual y_residual(const FluidState& prev, const FluidState& mid,
                     const FluidState& next, const Grid1D& g,
                     const ModelParams& p) {
  if (prev.rho.size() != g.size() || mid.rho.size() != g.size() ||
      next.rho.size() != g.size())
    throw ShapeError("y_residual: states are not on the same grid");
  if (!(prev.time < mid.time && mid.time < next.time))
    throw InputError("y_residual: snapshot times must be strictly increasing");

  const auto y0 = effective_pressure(prev, g, p);
  const auto y2 = effective_pressure(next, g, p);
  const auto v1 = effective_velocity(mid, g, p);
  const auto dv1 = ddx(v1, g);
  std::vector<double> y1(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    y1[i] = dv1[i] / mid.rho[i] + f2(mid.rho[i], p);
  const auto dy1 = ddx(y1, g);

  const double dt = next.time - prev.time;
  YResidual r;
  r.time = mid.time;
  r.field.resize(g.size());
  double sq = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double rho = mid.rho[i];
    const double dvu = v1[i] - mid.u[i];
    const double val = (y2[i] - y0[i]) / dt + mid.u[i] * dy1[i] +
                       f1(rho, p) * y1[i] - f1f2(rho, p) +
                       f1prime_rho_over_mu(rho, p) * dvu * dvu;
    r.field[i] = val;
    r.max_norm = std::max(r.max_norm, std::abs(val));
    sq += val * val;
  }
  r.l2_norm = std::sqrt(sq * g.dx());
  return r;
}

}  // namespace nsdv
