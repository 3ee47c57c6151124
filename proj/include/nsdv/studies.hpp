#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nsdv/config.hpp"
#include "nsdv/model.hpp"

namespace nsdv {

/// L2 distance ||a.rho - b.rho|| + ||a.u - b.u|| on a common grid.
double l2_distance(const FluidState& a, const FluidState& b, const Grid1D& g);

enum class DtMode { Cfl, DxSquared };

struct ConvergenceRow {
  std::size_t n = 0;
  double dx = 0.0;
  double max_dt = 0.0;
  double err_rho = 0.0;
  double err_u = 0.0;
  double error = 0.0;
  /// log2 of the error ratio to the previous level; NaN on the first row.
  double order = 0.0;
};

struct ConvergenceTable {
  std::string id;
  DtMode mode = DtMode::Cfl;
  std::vector<ConvergenceRow> rows;

  double min_order() const;
  bool monotone() const;
};

struct MmsOptions {
  double alpha = 0.75;
  double gamma = 2.0;
  double half_length = 1.0;
  double t_end = 0.5;
  std::size_t base_cells = 32;
  /// dt = dt_over_dx2 dx^2 in DxSquared mode.
  double dt_over_dx2 = 0.5;
};

/// Forced primitive runs with semi-implicit diffusion on N = base * 2^l + 1
/// nodes, errors against the exact manufactured fields at t_end.
ConvergenceTable mms_convergence(const std::string& id, int levels, DtMode mode,
                                 const MmsOptions& opt = {});

struct CrossRow {
  std::size_t n = 0;
  double dx = 0.0;
  double prim_eff = 0.0;
  double prim_lag = 0.0;
  double eff_lag = 0.0;
};

struct CrossTable {
  std::vector<CrossRow> rows;
  /// Smallest observed order over the three pairs and all level pairs.
  double min_order() const;
  /// Largest distance / dx over all rows and pairs.
  double max_constant() const;
};

/// Primitive, effective and Lagrangian runs of one scenario with explicit
/// diffusion and dt proportional to dx^2, compared at t_end.
CrossTable cross_formulation(const ScenarioConfig& base,
                             const std::vector<std::size_t>& sizes,
                             double t_end, double dt_over_dx2 = 0.1);

std::string format_convergence(const ConvergenceTable& t);
std::string format_cross(const CrossTable& t);

}  // namespace nsdv
