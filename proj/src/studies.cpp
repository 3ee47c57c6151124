#include "nsdv/studies.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "nsdv/errors.hpp"
#include "nsdv/format.hpp"
#include "nsdv/initdata.hpp"
#include "nsdv/lagrangian.hpp"
#include "nsdv/solver.hpp"

namespace nsdv {

double l2_distance(const FluidState& a, const FluidState& b, const Grid1D& g) {
  if (a.rho.size() != g.size() || b.rho.size() != g.size())
    throw ShapeError("l2_distance: states are not on the grid");
  double sr = 0.0, su = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    sr += (a.rho[i] - b.rho[i]) * (a.rho[i] - b.rho[i]);
    su += (a.u[i] - b.u[i]) * (a.u[i] - b.u[i]);
  }
  return std::sqrt(sr * g.dx()) + std::sqrt(su * g.dx());
}

double ConvergenceTable::min_order() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < rows.size(); ++k) m = std::min(m, rows[k].order);
  return m;
}

bool ConvergenceTable::monotone() const {
  for (std::size_t k = 1; k < rows.size(); ++k)
    if (!(rows[k].error < rows[k - 1].error)) return false;
  return true;
}

ConvergenceTable mms_convergence(const std::string& id, int levels, DtMode mode,
                                 const MmsOptions& opt) {
  if (levels < 2) throw InputError("convergence needs at least 2 levels");
  const auto ms = ManufacturedSolution::create(id);
  const auto p = ModelParams::create(opt.alpha, opt.gamma, opt.half_length);
  ConvergenceTable table;
  table.id = id;
  table.mode = mode;
  for (int l = 0; l < levels; ++l) {
    const std::size_t n = opt.base_cells * (std::size_t{1} << l) + 1;
    const Grid1D g(n, opt.half_length);
    SolverConfig cfg;
    cfg.t_end = opt.t_end;
    cfg.output_cadence = opt.t_end;
    cfg.diffusion = DiffusionTreatment::SemiImplicit;
    if (mode == DtMode::DxSquared) cfg.dt_over_dx2 = opt.dt_over_dx2;
    const auto tr = run(ms.exact(0.0, g), cfg, g, p, &ms);
    if (tr.blowup) throw NumericalFailure("manufactured run reached vacuum", tr.blowup->time);
    const auto& fin = tr.snapshots.back();
    const auto ex = ms.exact(fin.time, g);
    ConvergenceRow row;
    row.n = n;
    row.dx = g.dx();
    row.max_dt = tr.max_dt;
    double sr = 0.0, su = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sr += std::pow(fin.rho[i] - ex.rho[i], 2);
      su += std::pow(fin.u[i] - ex.u[i], 2);
    }
    row.err_rho = std::sqrt(sr * g.dx());
    row.err_u = std::sqrt(su * g.dx());
    row.error = row.err_rho + row.err_u;
    row.order = table.rows.empty()
                    ? std::numeric_limits<double>::quiet_NaN()
                    : std::log2(table.rows.back().error / row.error);
    table.rows.push_back(row);
  }
  return table;
}

double CrossTable::min_order() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto& a = rows[k - 1];
    const auto& b = rows[k];
    const double r = std::log2(a.dx / b.dx);
    m = std::min({m, std::log2(a.prim_eff / b.prim_eff) / r,
                  std::log2(a.prim_lag / b.prim_lag) / r,
                  std::log2(a.eff_lag / b.eff_lag) / r});
  }
  return m;
}

double CrossTable::max_constant() const {
  double m = 0.0;
  for (const auto& r : rows)
    m = std::max({m, r.prim_eff / r.dx, r.prim_lag / r.dx, r.eff_lag / r.dx});
  return m;
}

CrossTable cross_formulation(const ScenarioConfig& base,
                             const std::vector<std::size_t>& sizes,
                             double t_end, double dt_over_dx2) {
  CrossTable table;
  for (std::size_t n : sizes) {
    ScenarioConfig c = base;
    c.n_cells = n;
    c.solver.t_end = t_end;
    c.solver.output_cadence = t_end;
    c.solver.diffusion = DiffusionTreatment::Explicit;
    c.solver.fixed_dt.reset();
    c.solver.dt_over_dx2 = dt_over_dx2;
    const auto p = c.model();
    const auto g = c.grid();
    const auto init = build_initial(c).state;

    c.solver.formulation = Formulation::Primitive;
    const auto prim = run(init, c.solver, g, p);
    c.solver.formulation = Formulation::Effective;
    const auto eff = run(init, c.solver, g, p);
    const auto lag = run_lagrangian(init, c.solver, g, p);
    if (prim.blowup || eff.blowup || lag.eulerian.blowup)
      throw NumericalFailure("cross-formulation run reached vacuum", t_end);

    const auto& a = prim.snapshots.back();
    const auto& b = eff.snapshots.back();
    const auto& l = lag.eulerian.snapshots.back();
    table.rows.push_back(CrossRow{n, g.dx(), l2_distance(a, b, g),
                                  l2_distance(a, l, g), l2_distance(b, l, g)});
  }
  return table;
}

std::string format_convergence(const ConvergenceTable& t) {
  std::ostringstream os;
  os << "# " << t.id << " dt_mode=" << (t.mode == DtMode::Cfl ? "cfl" : "dx2") << '\n';
  os << "n,dx,max_dt,err_rho,err_u,error,order\n";
  for (const auto& r : t.rows)
    os << r.n << ',' << format_double(r.dx) << ',' << format_double(r.max_dt) << ','
       << format_double(r.err_rho) << ',' << format_double(r.err_u) << ','
       << format_double(r.error) << ',' << format_double(r.order) << '\n';
  return os.str();
}

std::string format_cross(const CrossTable& t) {
  std::ostringstream os;
  os << "n,dx,primitive_effective,primitive_lagrangian,effective_lagrangian\n";
  for (const auto& r : t.rows)
    os << r.n << ',' << format_double(r.dx) << ',' << format_double(r.prim_eff) << ','
       << format_double(r.prim_lag) << ',' << format_double(r.eff_lag) << '\n';
  return os.str();
}

}  // namespace nsdv
