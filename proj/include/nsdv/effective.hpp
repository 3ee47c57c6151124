#pragma once

#include <vector>

#include "nsdv/model.hpp"

namespace nsdv {

/// Derived fields of one FluidState, all sampled on the state's grid.
struct EffectiveFields {
  std::vector<double> v;
  std::vector<double> w1;
  std::vector<double> y;
  std::vector<double> udot;
};

/// v = u + (mu(rho)/rho^2) d_x rho.
std::vector<double> effective_velocity(const FluidState& s, const Grid1D& g,
                                       const ModelParams& p);
/// w1 = rho^alpha d_x u - P(rho) + P(1).
std::vector<double> effective_flux(const FluidState& s, const Grid1D& g,
                                   const ModelParams& p);
/// y = d_x v / rho + F2(rho).
std::vector<double> effective_pressure(const FluidState& s, const Grid1D& g,
                                       const ModelParams& p);
/// Material acceleration from the momentum balance of a single snapshot.
std::vector<double> convective_derivative(const FluidState& s, const Grid1D& g,
                                          const ModelParams& p);

EffectiveFields effective_fields(const FluidState& s, const Grid1D& g,
                                 const ModelParams& p);

struct YResidual {
  double time = 0.0;
  std::vector<double> field;
  double max_norm = 0.0;
  double l2_norm = 0.0;
};

/// Residual of the y transport equation at the middle of three snapshots:
/// D_t y + F1 y - F1 F2 + (F1' rho / mu)(v - u)^2.
/// Throws ShapeError on grid mismatch and InputError on non-increasing times.
YResidual y_residual(const FluidState& prev, const FluidState& mid,
                     const FluidState& next, const Grid1D& g,
                     const ModelParams& p);

}  // namespace nsdv
