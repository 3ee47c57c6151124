#include "nsdv/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "nsdv/errors.hpp"
#include "nsdv/tridiagonal.hpp"

namespace nsdv {

namespace {

// Linear interpolation of node samples on a uniform grid; constant beyond.
double interp_uniform(std::span<const double> f, const Grid1D& g, double x) {
  const std::size_t n = g.size();
  const double s = (x + g.half_length()) / g.dx();
  if (s <= 0.0) return f[0];
  if (s >= static_cast<double>(n - 1)) return f[n - 1];
  const auto i = static_cast<std::size_t>(s);
  const double w = s - static_cast<double>(i);
  return (1.0 - w) * f[i] + w * f[i + 1];
}

// Linear interpolation on strictly increasing abscissae; constant beyond.
double interp_sorted(std::span<const double> xs, std::span<const double> f,
                     double x) {
  if (x <= xs.front()) return f.front();
  if (x >= xs.back()) return f.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const auto j = static_cast<std::size_t>(it - xs.begin());
  const double w = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
  return (1.0 - w) * f[j - 1] + w * f[j];
}

void require_monotone(std::span<const double> xs, double t) {
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1]))
      throw HomeomorphismViolation("flow map is not increasing at node " +
                                   std::to_string(i) +
                                   " (t=" + std::to_string(t) + ")");
}

struct SampledTrajectory {
  Grid1D grid;
  std::vector<double> times;
  std::vector<std::vector<double>> u;
  std::vector<std::vector<double>> dudx;

  double eval(const std::vector<std::vector<double>>& f, double t,
              double x) const {
    if (t <= times.front()) return interp_uniform(f.front(), grid, x);
    if (t >= times.back()) return interp_uniform(f.back(), grid, x);
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const auto k = static_cast<std::size_t>(it - times.begin());
    const double w = (t - times[k - 1]) / (times[k] - times[k - 1]);
    return (1.0 - w) * interp_uniform(f[k - 1], grid, x) +
           w * interp_uniform(f[k], grid, x);
  }
};

}  // namespace

VelocitySampler sampler_from_trajectory(const Trajectory& tr) {
  auto data = std::make_shared<SampledTrajectory>(
      SampledTrajectory{tr.grid, {}, {}, {}});
  for (const auto& s : tr.snapshots) {
    data->times.push_back(s.time);
    data->u.push_back(s.u);
    data->dudx.push_back(ddx(s.u, tr.grid));
  }
  VelocitySampler vs;
  vs.u = [data](double t, double x) { return data->eval(data->u, t, x); };
  vs.dudx = [data](double t, double x) { return data->eval(data->dudx, t, x); };
  return vs;
}

FlowMap integrate_flow(const VelocitySampler& sampler, const Grid1D& g,
                       std::span<const double> times, std::size_t substeps) {
  if (times.empty() || times.front() != 0.0)
    throw InputError("integrate_flow: times must start at 0");
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1]))
      throw InputError("integrate_flow: times must be strictly increasing");
  if (substeps == 0) throw InputError("integrate_flow: substeps must be >= 1");

  const std::size_t n = g.size();
  const double L = g.half_length();
  FlowMap fm;
  fm.times.assign(times.begin(), times.end());
  std::vector<double> X = g.coords();
  std::vector<double> logj(n, 0.0);

  auto record = [&](double t) {
    require_monotone(X, t);
    fm.x_map.push_back(X);
    auto jd = ddx(X, g);
    std::vector<double> je(n);
    for (std::size_t i = 0; i < n; ++i) je[i] = std::exp(logj[i]);
    for (std::size_t i = 1; i + 1 < n; ++i)
      fm.jacobian_discrepancy =
          std::max(fm.jacobian_discrepancy, std::abs(jd[i] - je[i]));
    fm.jacobian.push_back(std::move(jd));
    fm.jacobian_exp.push_back(std::move(je));
  };

  record(0.0);
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double h =
        (times[k] - times[k - 1]) / static_cast<double>(substeps);
    for (std::size_t s = 0; s < substeps; ++s) {
      const double t = times[k - 1] + static_cast<double>(s) * h;
      for (std::size_t i = 0; i < n; ++i) {
        const double x0 = X[i];
        const double k1 = sampler.u(t, x0);
        const double k2 = sampler.u(t + h, x0 + h * k1);
        const double x1 = x0 + 0.5 * h * (k1 + k2);
        logj[i] += 0.5 * h * (sampler.dudx(t, x0) + sampler.dudx(t + h, x1));
        if (sampler.check_domain && std::abs(x1) > L * (1.0 + 1e-12))
          throw DomainExit("particle " + std::to_string(i) +
                           " left the domain at t=" + std::to_string(t + h));
        X[i] = x1;
      }
    }
    record(times[k]);
  }
  return fm;
}

FlowMap integrate_flow(const Trajectory& tr, std::size_t substeps) {
  std::vector<double> times;
  for (const auto& s : tr.snapshots) times.push_back(s.time);
  return integrate_flow(sampler_from_trajectory(tr), tr.grid, times, substeps);
}

std::size_t flow_time_index(const FlowMap& flow, double t) {
  for (std::size_t k = 0; k < flow.times.size(); ++k)
    if (std::abs(flow.times[k] - t) <= 1e-9) return k;
  throw InputError("time " + std::to_string(t) + " is not a flow-map time");
}

std::vector<double> to_lagrangian(std::span<const double> field,
                                  const FlowMap& flow, double t,
                                  const Grid1D& g) {
  if (field.size() != g.size())
    throw ShapeError("to_lagrangian: field length does not match grid");
  const auto& X = flow.x_map[flow_time_index(flow, t)];
  require_monotone(X, t);
  std::vector<double> out(g.size());
  for (std::size_t j = 0; j < g.size(); ++j)
    out[j] = interp_uniform(field, g, X[j]);
  return out;
}

std::vector<double> to_eulerian(std::span<const double> field,
                                const FlowMap& flow, double t,
                                const Grid1D& g) {
  if (field.size() != g.size())
    throw ShapeError("to_eulerian: field length does not match grid");
  const auto& X = flow.x_map[flow_time_index(flow, t)];
  require_monotone(X, t);
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    out[i] = interp_sorted(X, field, g.x(i));
  return out;
}

std::vector<double> lagrangian_density(const FlowMap& flow,
                                       std::span<const double> rho0, double t) {
  const auto& J = flow.jacobian[flow_time_index(flow, t)];
  if (rho0.size() != J.size())
    throw ShapeError("lagrangian_density: rho0 length does not match flow");
  std::vector<double> out(J.size());
  for (std::size_t i = 0; i < J.size(); ++i) {
    if (!(J[i] > 0.0))
      throw HomeomorphismViolation("non-positive Jacobian at node " +
                                   std::to_string(i));
    out[i] = rho0[i] / J[i];
  }
  return out;
}

std::vector<double> cell_density(const FluidState& s) {
  std::vector<double> r(s.rho.size() - 1);
  for (std::size_t c = 0; c < r.size(); ++c)
    r[c] = 0.5 * (s.rho[c] + s.rho[c + 1]);
  return r;
}

LagrangianState lagrangian_initial(const FluidState& s, const Grid1D& g) {
  check_state(s, g);
  LagrangianState l;
  l.time = s.time;
  l.u = s.u;
  l.x = g.coords();
  l.rho = cell_density(s);
  l.jac.assign(l.rho.size(), 1.0);
  return l;
}

LagrangianState step_lagrangian(const LagrangianState& s, double dt,
                                std::span<const double> rho0,
                                const Grid1D& g, const ModelParams& p) {
  const std::size_t n = g.size();
  const std::size_t nc = n - 1;
  if (s.u.size() != n || s.jac.size() != nc || s.rho.size() != nc ||
      rho0.size() != nc)
    throw ShapeError("step_lagrangian: state length does not match grid");
  const double dx = g.dx();
  const double r = dt / (dx * dx);
  const double t1 = s.time + dt;

  std::vector<double> kappa(nc), pr(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    kappa[c] = std::pow(s.rho[c], 1.0 + p.alpha()) / rho0[c];
    pr[c] = std::pow(s.rho[c], p.gamma());
  }
  std::vector<double> lo(n, 0.0), di(n, 1.0), up(n, 0.0), rhs(n, 0.0);
  rhs.front() = kFarFieldVelocity;
  rhs.back() = kFarFieldVelocity;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double m = 0.5 * (rho0[i - 1] + rho0[i]);
    lo[i] = -r * kappa[i - 1];
    up[i] = -r * kappa[i];
    di[i] = m + r * (kappa[i - 1] + kappa[i]);
    rhs[i] = m * s.u[i] - dt * (pr[i] - pr[i - 1]) / dx;
  }
  LagrangianState out;
  out.time = t1;
  out.u = solve_tridiagonal(lo, di, up, rhs);
  out.x.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(out.u[i]))
      throw NumericalFailure("non-finite Lagrangian velocity", t1);
    out.x[i] = s.x[i] + dt * out.u[i];
  }
  out.jac.resize(nc);
  out.rho.resize(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    out.jac[c] = s.jac[c] + dt * (out.u[c + 1] - out.u[c]) / dx;
    if (!(out.jac[c] > 0.0))
      throw HomeomorphismViolation("non-positive Jacobian in cell " +
                                   std::to_string(c) +
                                   " (t=" + std::to_string(t1) + ")");
    out.rho[c] = rho0[c] / out.jac[c];
    if (out.rho[c] <= kRhoFloor) throw VacuumBlowUp(t1, c, out.rho[c]);
  }
  return out;
}

FluidState lagrangian_to_eulerian(const LagrangianState& s, const Grid1D& g) {
  const std::size_t n = g.size();
  std::vector<double> pos(n + 1), val(n + 1);
  pos[0] = s.x[0];
  val[0] = s.rho[0];
  for (std::size_t c = 0; c + 1 < n; ++c) {
    pos[c + 1] = 0.5 * (s.x[c] + s.x[c + 1]);
    val[c + 1] = s.rho[c];
  }
  pos[n] = s.x[n - 1];
  val[n] = s.rho[n - 2];
  require_monotone(s.x, s.time);
  FluidState f{s.time, std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    f.rho[i] = interp_sorted(pos, val, g.x(i));
    f.u[i] = interp_sorted(s.x, s.u, g.x(i));
  }
  return f;
}

LagrangianRun run_lagrangian(const FluidState& initial, const SolverConfig& cfg,
                             const Grid1D& g, const ModelParams& p) {
  cfg.validate();
  const auto rho0 = cell_density(initial);
  const double inf0 = *std::min_element(rho0.begin(), rho0.end());
  const double sup0 = *std::max_element(rho0.begin(), rho0.end());
  LagrangianRun out{{}, Trajectory{p, g, {}, {}, 0, 0.0, std::nullopt}, 1.0,
                    true};
  LagrangianState cur = lagrangian_initial(initial, g);
  out.states.push_back(cur);
  out.eulerian.snapshots.push_back(initial);
  out.eulerian.integrals.push_back({});

  const std::size_t n = g.size();
  const double dx2 = g.dx() * g.dx();
  std::size_t k = 1;
  FluidState nodal{0.0, std::vector<double>(n), std::vector<double>(n)};
  while (true) {
    const double target =
        std::min(static_cast<double>(k) * cfg.output_cadence, cfg.t_end);
    const double remaining = target - cur.time;
    nodal.time = cur.time;
    nodal.u = cur.u;
    nodal.rho.front() = cur.rho.front();
    nodal.rho.back() = cur.rho.back();
    for (std::size_t i = 1; i + 1 < n; ++i)
      nodal.rho[i] = 0.5 * (cur.rho[i - 1] + cur.rho[i]);
    double dt = stable_dt(nodal, g, cfg, p);
    if (cfg.dt_over_dx2) dt = std::min(dt, *cfg.dt_over_dx2 * dx2);
    if (cfg.fixed_dt) dt = *cfg.fixed_dt;
    bool hit = false;
    if (dt >= remaining * (1.0 - 1e-12)) {
      dt = remaining;
      hit = true;
    }
    try {
      cur = step_lagrangian(cur, dt, rho0, g, p);
    } catch (const VacuumBlowUp& e) {
      out.eulerian.blowup = BlowUpInfo{e.time(), e.node(), e.rho()};
      return out;
    }
    if (hit) cur.time = target;
    ++out.eulerian.steps;
    out.eulerian.max_dt = std::max(out.eulerian.max_dt, dt);

    const double rmax = *std::max_element(cur.rho.begin(), cur.rho.end());
    const double rmin = *std::min_element(cur.rho.begin(), cur.rho.end());
    const double ct = rmax / rmin;
    for (double j : cur.jac) {
      out.min_jacobian = std::min(out.min_jacobian, j);
      if (j < inf0 / ct * (1.0 - 1e-12) || j > ct * sup0 * (1.0 + 1e-12))
        out.jacobian_bounds_hold = false;
    }

    if (hit) {
      out.states.push_back(cur);
      out.eulerian.snapshots.push_back(lagrangian_to_eulerian(cur, g));
      out.eulerian.integrals.push_back({});
      ++k;
      if (target >= cfg.t_end) break;
    }
  }
  return out;
}

DecayReport v_lagrangian_decay(const Trajectory& tr, const FlowMap& flow,
                               std::span<const double> v0) {
  const auto& g = tr.grid;
  const auto& p = tr.params;
  if (flow.times.size() != tr.snapshots.size())
    throw InputError("v_lagrangian_decay: flow and trajectory times differ");
  if (v0.size() != g.size())
    throw ShapeError("v_lagrangian_decay: v0 length does not match grid");
  const std::size_t n = g.size();
  DecayReport rep;
  std::vector<double> v(v0.begin(), v0.end());

  auto sample = [&](std::size_t k, std::vector<double>& F, std::vector<double>& U) {
    const auto& s = tr.snapshots[k];
    for (std::size_t j = 0; j < n; ++j) {
      const double x = flow.x_map[k][j];
      F[j] = f1(interp_uniform(s.rho, g, x), p);
      U[j] = interp_uniform(s.u, g, x);
    }
  };
  auto envelope = [&]() {
    double e = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      e = std::max(e, std::abs(v[j]) / (1.0 + std::abs(v0[j])));
    return e;
  };

  std::vector<double> Fa(n), Ua(n), Fb(n), Ub(n);
  sample(0, Fa, Ua);
  rep.times.push_back(flow.times[0]);
  rep.envelope.push_back(envelope());
  for (std::size_t k = 1; k < flow.times.size(); ++k) {
    sample(k, Fb, Ub);
    const double dt = flow.times[k] - flow.times[k - 1];
    for (std::size_t j = 0; j < n; ++j) {
      const double F = 0.5 * (Fa[j] + Fb[j]);
      const double U = 0.5 * (Ua[j] + Ub[j]);
      v[j] = U + (v[j] - U) * std::exp(-F * dt);
    }
    rep.times.push_back(flow.times[k]);
    rep.envelope.push_back(envelope());
    std::swap(Fa, Fb);
    std::swap(Ua, Ub);
  }
  rep.v_final = v;
  return rep;
}

}  // namespace nsdv
