#pragma once

#include <span>
#include <string>
#include <vector>

#include "nsdv/config.hpp"
#include "nsdv/model.hpp"
#include "nsdv/solver.hpp"

namespace nsdv {

/// Discrete convolution with j_n(y) = n j(n y), j(y) = c exp(-1/(1-(y/2)^2))
/// on (-2, 2). Weights are normalised on the grid and the field is extended
/// by its end values, so constants are reproduced exactly.
/// Throws InputError when n < 1 or the support 2/n exceeds the half-length.
std::vector<double> mollify(std::span<const double> field, int n,
                            const Grid1D& g);

struct InitialData {
  FluidState state;
  std::vector<double> v0;
  /// max_i (v0[i+1] - v0[i]) / dx.
  double oleinik_constant = 0.0;
};

/// Named rough v0 profiles on |x| < 1: "sawtooth" (x - sign x) and
/// "ramp_down" (-sin(pi x)), both scaled.
std::vector<double> v0_profile(const std::string& id, double scale,
                               const Grid1D& g);

/// Builds the t = 0 state. Throws InputError on rho0 <= 0 and ConfigError
/// when the far-field compatibility fails (manufactured data excepted).
InitialData build_initial(const ScenarioConfig& cfg);

/// rho* = 1 + a e^-t cos(k x), u* = b e^-t sin(k x), k = pi / L.
class ManufacturedSolution : public ExternalForcing {
 public:
  /// Registered ids: "manufactured-1" (a = b = 0.1), "manufactured-0" (a = b = 0).
  static ManufacturedSolution create(const std::string& id);
  ManufacturedSolution(double a, double b) : a_(a), b_(b) {}

  FluidState exact(double t, const Grid1D& g) const;
  void source(double t, const Grid1D& g, const ModelParams& p,
              std::vector<double>& mass,
              std::vector<double>& momentum) const override;
  BoundaryValues boundary(double t, const Grid1D& g,
                          const ModelParams& p) const override;

  double a() const { return a_; }
  double b() const { return b_; }

 private:
  double a_;
  double b_;
};

struct ForcingFields {
  std::vector<double> mass;
  std::vector<double> momentum;
};

/// Residual of the primitive system at the manufactured fields.
ForcingFields manufactured_source(const std::string& id, double t,
                                  const Grid1D& g, const ModelParams& p);

}  // namespace nsdv
