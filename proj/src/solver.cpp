#include "nsdv/solver.hpp"

#include <algorithm>
#include <cmath>

#include "nsdv/errors.hpp"
#include "nsdv/tridiagonal.hpp"

namespace nsdv {

void SolverConfig::validate() const {
  if (!(cfl_number > 0.0 && cfl_number <= 0.9))
    throw ConfigError("cfl_number must lie in (0, 0.9]");
  if (!(t_end > 0.0) || !std::isfinite(t_end))
    throw ConfigError("t_end must be positive");
  if (!(output_cadence > 0.0) || !std::isfinite(output_cadence))
    throw ConfigError("output_cadence must be positive");
  if (fixed_dt && !(*fixed_dt > 0.0))
    throw ConfigError("fixed_dt must be positive");
  if (dt_over_dx2 && !(*dt_over_dx2 > 0.0))
    throw ConfigError("dt_over_dx2 must be positive");
}

namespace {

// Upwind-biased kappa = 1/3 reconstruction at face k (between nodes k, k+1).
// Ghost values beyond the ends are linear extrapolations.
double reconstruct(const std::vector<double>& f, std::size_t k, bool from_left) {
  const std::size_t n = f.size();
  if (from_left) {
    const double fm = k == 0 ? 2.0 * f[0] - f[1] : f[k - 1];
    return -fm / 6.0 + 5.0 * f[k] / 6.0 + f[k + 1] / 3.0;
  }
  const double fp = k + 2 >= n ? 2.0 * f[n - 1] - f[n - 2] : f[k + 2];
  return -fp / 6.0 + 5.0 * f[k + 1] / 6.0 + f[k] / 3.0;
}

void check_density(const std::vector<double>& rho, double t) {
  for (std::size_t i = 0; i < rho.size(); ++i)
    if (!std::isfinite(rho[i])) throw NumericalFailure("non-finite density", t);
  for (std::size_t i = 0; i < rho.size(); ++i)
    if (rho[i] <= kRhoFloor) throw VacuumBlowUp(t, i, rho[i]);
}

void check_finite(const std::vector<double>& f, const char* what, double t) {
  for (double x : f)
    if (!std::isfinite(x)) throw NumericalFailure(std::string("non-finite ") + what, t);
}

BoundaryValues boundary_at(double t, const Grid1D& g, const ModelParams& p,
                           const ExternalForcing* forcing) {
  return forcing ? forcing->boundary(t, g, p) : BoundaryValues{};
}

struct Conserved {
  std::vector<double> rho;
  std::vector<double> m;
};

void apply_boundary(Conserved& c, const BoundaryValues& b) {
  c.rho.front() = b.rho_left;
  c.m.front() = b.rho_left * b.u_left;
  c.rho.back() = b.rho_right;
  c.m.back() = b.rho_right * b.u_right;
}

// Time derivative of (rho, m) on interior nodes; boundary rows are zero.
Conserved primitive_rhs(const Conserved& c, double t, const Grid1D& g,
                        const ModelParams& p, bool explicit_viscosity,
                        const ExternalForcing* forcing) {
  const std::size_t n = g.size();
  const double dx = g.dx();
  std::vector<double> u(n), pr(n), mu(n);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = c.m[i] / c.rho[i];
    pr[i] = std::pow(c.rho[i], p.gamma());
    mu[i] = std::pow(c.rho[i], p.alpha());
  }
  std::vector<double> fm(n - 1), fq(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double uf = 0.5 * (u[k] + u[k + 1]);
    const bool left = uf >= 0.0;
    const double mass = uf * reconstruct(c.rho, k, left);
    fm[k] = mass;
    double q = mass * reconstruct(u, k, left) + 0.5 * (pr[k] + pr[k + 1]);
    if (explicit_viscosity)
      q -= 0.5 * (mu[k] + mu[k + 1]) * (u[k + 1] - u[k]) / dx;
    fq[k] = q;
  }
  Conserved d{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t i = 1; i + 1 < n; ++i) {
    d.rho[i] = -(fm[i] - fm[i - 1]) / dx;
    d.m[i] = -(fq[i] - fq[i - 1]) / dx;
  }
  if (forcing) {
    std::vector<double> sm(n, 0.0), sq(n, 0.0);
    forcing->source(t, g, p, sm, sq);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      d.rho[i] += sm[i];
      d.m[i] += sq[i];
    }
  }
  return d;
}

// Backward-Euler solve of rho (u - u_star)/dt = d_x(mu(rho) d_x u) with
// Dirichlet ends.
std::vector<double> implicit_viscous(const std::vector<double>& rho,
                                     const std::vector<double>& u_star,
                                     double dt, const Grid1D& g,
                                     const ModelParams& p) {
  const std::size_t n = g.size();
  const double r = dt / (g.dx() * g.dx());
  std::vector<double> mu(n);
  for (std::size_t i = 0; i < n; ++i) mu[i] = std::pow(rho[i], p.alpha());
  std::vector<double> lo(n, 0.0), di(n, 1.0), up(n, 0.0), rhs(u_star);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double ml = 0.5 * (mu[i - 1] + mu[i]);
    const double mr = 0.5 * (mu[i] + mu[i + 1]);
    lo[i] = -r * ml;
    up[i] = -r * mr;
    di[i] = rho[i] + r * (ml + mr);
    rhs[i] = rho[i] * u_star[i];
  }
  return solve_tridiagonal(lo, di, up, rhs);
}

// Backward-Euler solve of (rho - rho_star)/dt = d_x(D d_x rho), D = rho^(alpha-1)
// frozen at rho_star.
std::vector<double> implicit_density_diffusion(const std::vector<double>& rho_star,
                                               double dt, const Grid1D& g,
                                               const ModelParams& p) {
  const std::size_t n = g.size();
  const double r = dt / (g.dx() * g.dx());
  std::vector<double> dcoef(n);
  for (std::size_t i = 0; i < n; ++i)
    dcoef[i] = std::pow(rho_star[i], p.alpha() - 1.0);
  std::vector<double> lo(n, 0.0), di(n, 1.0), up(n, 0.0), rhs(rho_star);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double dl = 0.5 * (dcoef[i - 1] + dcoef[i]);
    const double dr = 0.5 * (dcoef[i] + dcoef[i + 1]);
    lo[i] = -r * dl;
    up[i] = -r * dr;
    di[i] = 1.0 + r * (dl + dr);
  }
  return solve_tridiagonal(lo, di, up, rhs);
}

std::vector<double> grad_phi(const std::vector<double>& rho, const Grid1D& g,
                             const ModelParams& p) {
  std::vector<double> ph(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) ph[i] = phi(rho[i], p);
  auto d = ddx(ph, g);
  d.front() = 0.0;
  d.back() = 0.0;
  return d;
}

struct EffRhs {
  std::vector<double> rho;
  std::vector<double> v;
};

EffRhs effective_rhs(const std::vector<double>& rho, const std::vector<double>& v,
                     const Grid1D& g, const ModelParams& p, bool explicit_diffusion,
                     const EffectiveStepOptions& opt) {
  const std::size_t n = g.size();
  const double dx = g.dx();
  EffRhs d{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  std::vector<double> u(n, 0.0);
  if (!opt.zero_velocity) {
    const auto gp = grad_phi(rho, g, p);
    for (std::size_t i = 0; i < n; ++i) u[i] = v[i] - gp[i];
  }
  if (!opt.freeze_density) {
    std::vector<double> dc(n);
    for (std::size_t i = 0; i < n; ++i) dc[i] = std::pow(rho[i], p.alpha() - 1.0);
    std::vector<double> f(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const double vf = opt.zero_velocity ? 0.0 : 0.5 * (v[k] + v[k + 1]);
      double flux = vf * reconstruct(rho, k, vf >= 0.0);
      if (explicit_diffusion)
        flux -= 0.5 * (dc[k] + dc[k + 1]) * (rho[k + 1] - rho[k]) / dx;
      f[k] = flux;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) d.rho[i] = -(f[i] - f[i - 1]) / dx;
  }
  if (!opt.zero_velocity) {
    const auto dv = ddx_upwind(v, u, g);
    for (std::size_t i = 1; i + 1 < n; ++i) d.v[i] = -u[i] * dv[i];
  }
  return d;
}

double energy_dissipation_rate(const FluidState& s, const Grid1D& g,
                               const ModelParams& p) {
  const auto du = ddx(s.u, g);
  double sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    sum += std::pow(s.rho[i], p.alpha()) * du[i] * du[i];
  return sum * g.dx();
}

double bd_dissipation_rate(const FluidState& s, const Grid1D& g,
                           const ModelParams& p) {
  const auto dr = ddx(s.rho, g);
  double sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double rho = s.rho[i];
    const double dp = p.gamma() * std::pow(rho, p.gamma() - 1.0);
    sum += std::pow(rho, p.alpha()) * dp / (rho * rho) * dr[i] * dr[i];
  }
  return sum * g.dx();
}

}  // namespace

double stable_dt(const FluidState& s, const Grid1D& g, const SolverConfig& cfg,
                 const ModelParams& p) {
  double smax = 0.0;
  double dmax = 0.0;
  for (std::size_t i = 0; i < s.rho.size(); ++i) {
    const double rho = s.rho[i];
    if (!std::isfinite(rho) || !std::isfinite(s.u[i]))
      throw NumericalFailure("non-finite state in stable_dt", s.time);
    if (!(rho > 0.0)) throw DomainError("stable_dt: non-positive density");
    smax = std::max(smax, std::abs(s.u[i]) + sound_speed(rho, p));
    dmax = std::max(dmax, std::pow(rho, p.alpha() - 1.0));
  }
  double dt = g.dx() / smax;
  if (cfg.diffusion == DiffusionTreatment::Explicit)
    dt = std::min(dt, g.dx() * g.dx() / (2.0 * dmax));
  dt *= cfg.cfl_number;
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw NumericalFailure("stable_dt is not positive", s.time);
  return dt;
}

namespace {

// Heun step with every term explicit.
FluidState step_primitive_explicit(const FluidState& s, double dt,
                                   const Grid1D& g, const ModelParams& p,
                                   const ExternalForcing* forcing) {
  const std::size_t n = g.size();
  const double t0 = s.time;
  const double t1 = s.time + dt;

  Conserved c0{s.rho, std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) c0.m[i] = s.rho[i] * s.u[i];

  const auto d0 = primitive_rhs(c0, t0, g, p, true, forcing);
  Conserved c1{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    c1.rho[i] = c0.rho[i] + dt * d0.rho[i];
    c1.m[i] = c0.m[i] + dt * d0.m[i];
  }
  const auto b1 = boundary_at(t1, g, p, forcing);
  apply_boundary(c1, b1);
  check_density(c1.rho, t1);
  check_finite(c1.m, "momentum", t1);

  const auto d1 = primitive_rhs(c1, t1, g, p, true, forcing);
  FluidState out{t1, std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    out.rho[i] = 0.5 * (c0.rho[i] + c1.rho[i] + dt * d1.rho[i]);
    const double m = 0.5 * (c0.m[i] + c1.m[i] + dt * d1.m[i]);
    out.u[i] = m / out.rho[i];
  }
  out.rho.front() = b1.rho_left;
  out.rho.back() = b1.rho_right;
  out.u.front() = b1.u_left;
  out.u.back() = b1.u_right;
  check_density(out.rho, t1);
  check_finite(out.u, "velocity", t1);
  return out;
}

// Two-stage IMEX Runge-Kutta (ARS 2-2-2): advection, pressure and sources
// explicit, viscosity implicit in u with the stage density frozen.
FluidState step_primitive_imex(const FluidState& s, double dt, const Grid1D& g,
                               const ModelParams& p,
                               const ExternalForcing* forcing) {
  static const double kG = 1.0 - 1.0 / std::sqrt(2.0);
  static const double kD = 1.0 - 1.0 / (2.0 * kG);
  const std::size_t n = g.size();
  const double t0 = s.time;
  const double t2 = t0 + kG * dt;
  const double t3 = t0 + dt;

  Conserved c1{s.rho, std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) c1.m[i] = s.rho[i] * s.u[i];
  const auto e1 = primitive_rhs(c1, t0, g, p, false, forcing);

  // Stage 2.
  const auto b2 = boundary_at(t2, g, p, forcing);
  Conserved c2{std::vector<double>(n), std::vector<double>(n)};
  std::vector<double> mhat2(n), ustar(n);
  for (std::size_t i = 0; i < n; ++i) {
    c2.rho[i] = c1.rho[i] + kG * dt * e1.rho[i];
    mhat2[i] = c1.m[i] + kG * dt * e1.m[i];
  }
  c2.rho.front() = b2.rho_left;
  c2.rho.back() = b2.rho_right;
  check_density(c2.rho, t2);
  for (std::size_t i = 0; i < n; ++i) ustar[i] = mhat2[i] / c2.rho[i];
  ustar.front() = b2.u_left;
  ustar.back() = b2.u_right;
  const auto u2 = implicit_viscous(c2.rho, ustar, kG * dt, g, p);
  check_finite(u2, "velocity", t2);
  std::vector<double> i2(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) c2.m[i] = c2.rho[i] * u2[i];
  for (std::size_t i = 1; i + 1 < n; ++i) i2[i] = (c2.m[i] - mhat2[i]) / (kG * dt);
  const auto e2 = primitive_rhs(c2, t2, g, p, false, forcing);

  // Stage 3 (the new state).
  const auto b3 = boundary_at(t3, g, p, forcing);
  FluidState out{t3, std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    out.rho[i] = c1.rho[i] + dt * (kD * e1.rho[i] + (1.0 - kD) * e2.rho[i]);
    const double mhat = c1.m[i] + dt * (kD * e1.m[i] + (1.0 - kD) * e2.m[i]) +
                        dt * (1.0 - kG) * i2[i];
    ustar[i] = mhat;
  }
  out.rho.front() = b3.rho_left;
  out.rho.back() = b3.rho_right;
  check_density(out.rho, t3);
  for (std::size_t i = 0; i < n; ++i) ustar[i] /= out.rho[i];
  ustar.front() = b3.u_left;
  ustar.back() = b3.u_right;
  out.u = implicit_viscous(out.rho, ustar, kG * dt, g, p);
  check_finite(out.u, "velocity", t3);
  return out;
}

}  // namespace

FluidState step_primitive(const FluidState& s, double dt, const Grid1D& g,
                          const SolverConfig& cfg, const ModelParams& p,
                          const ExternalForcing* forcing) {
  if (s.rho.size() != g.size() || s.u.size() != g.size())
    throw ShapeError("step_primitive: state length does not match grid");
  if (cfg.diffusion == DiffusionTreatment::Explicit)
    return step_primitive_explicit(s, dt, g, p, forcing);
  return step_primitive_imex(s, dt, g, p, forcing);
}

EffectiveState to_effective(const FluidState& s, const Grid1D& g,
                            const ModelParams& p) {
  check_state(s, g);
  const auto gp = grad_phi(s.rho, g, p);
  EffectiveState e{s.time, s.rho, std::vector<double>(g.size())};
  for (std::size_t i = 0; i < g.size(); ++i) e.v[i] = s.u[i] + gp[i];
  return e;
}

FluidState from_effective(const EffectiveState& s, const Grid1D& g,
                          const ModelParams& p) {
  if (s.rho.size() != g.size() || s.v.size() != g.size())
    throw ShapeError("from_effective: state length does not match grid");
  const auto gp = grad_phi(s.rho, g, p);
  FluidState f{s.time, s.rho, std::vector<double>(g.size())};
  for (std::size_t i = 0; i < g.size(); ++i) f.u[i] = s.v[i] - gp[i];
  return f;
}

EffectiveState step_effective(const EffectiveState& s, double dt,
                              const Grid1D& g, const SolverConfig& cfg,
                              const ModelParams& p,
                              const EffectiveStepOptions& opt) {
  const std::size_t n = g.size();
  if (s.rho.size() != n || s.v.size() != n)
    throw ShapeError("step_effective: state length does not match grid");
  const bool expl = cfg.diffusion == DiffusionTreatment::Explicit;
  const double t1 = s.time + dt;

  const auto d0 = effective_rhs(s.rho, s.v, g, p, expl, opt);
  std::vector<double> r1(n), v1(n);
  for (std::size_t i = 0; i < n; ++i) {
    r1[i] = s.rho[i] + dt * d0.rho[i];
    v1[i] = s.v[i] + dt * d0.v[i];
  }
  check_density(r1, t1);
  check_finite(v1, "effective velocity", t1);
  const auto d1 = effective_rhs(r1, v1, g, p, expl, opt);
  EffectiveState out{t1, std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    out.rho[i] = 0.5 * (s.rho[i] + r1[i] + dt * d1.rho[i]);
    out.v[i] = 0.5 * (s.v[i] + v1[i] + dt * d1.v[i]);
  }
  if (!opt.freeze_density) {
    out.rho.front() = kFarFieldDensity;
    out.rho.back() = kFarFieldDensity;
    if (!expl) out.rho = implicit_density_diffusion(out.rho, dt, g, p);
  }
  check_density(out.rho, t1);

  // Exact integration of the damping term over the step with u frozen.
  std::vector<double> u(n, 0.0);
  if (!opt.zero_velocity) {
    const auto gp = grad_phi(out.rho, g, p);
    for (std::size_t i = 0; i < n; ++i) u[i] = out.v[i] - gp[i];
  }
  for (std::size_t i = 0; i < n; ++i)
    out.v[i] = u[i] + (out.v[i] - u[i]) * std::exp(-f1(out.rho[i], p) * dt);
  if (!opt.freeze_density) {
    out.v.front() = kFarFieldVelocity;
    out.v.back() = kFarFieldVelocity;
  }
  check_finite(out.v, "effective velocity", t1);
  return out;
}

Trajectory run(const FluidState& initial, const SolverConfig& cfg,
               const Grid1D& g, const ModelParams& p,
               const ExternalForcing* forcing) {
  cfg.validate();
  check_state(initial, g);
  Trajectory tr{p, g, {}, {}, 0, 0.0, std::nullopt};
  tr.snapshots.push_back(initial);
  tr.integrals.push_back({});

  const bool effective = cfg.formulation == Formulation::Effective;
  FluidState cur = initial;
  EffectiveState eff;
  if (effective) eff = to_effective(initial, g, p);

  const double e_pow = 2.0 * p.gamma() - 2.0 * p.alpha() - 1.0;
  auto rates = [&](const FluidState& s) {
    const double rmax = *std::max_element(s.rho.begin(), s.rho.end());
    return StepIntegrals{energy_dissipation_rate(s, g, p), bd_dissipation_rate(s, g, p),
                         std::pow(rmax, e_pow)};
  };
  StepIntegrals acc;
  StepIntegrals prev = rates(initial);
  std::size_t k = 1;
  const double dx2 = g.dx() * g.dx();
  while (true) {
    const double target =
        std::min(static_cast<double>(k) * cfg.output_cadence, cfg.t_end);
    const double remaining = target - cur.time;
    const double limit = stable_dt(cur, g, cfg, p);
    double dt = limit;
    if (cfg.dt_over_dx2) dt = std::min(dt, *cfg.dt_over_dx2 * dx2);
    bool unstable = false;
    if (cfg.fixed_dt) {
      dt = *cfg.fixed_dt;
      unstable = dt > limit;
    }
    bool hit = false;
    if (dt >= remaining * (1.0 - 1e-12)) {
      dt = remaining;
      hit = true;
    }

    try {
      if (effective) {
        eff = step_effective(eff, dt, g, cfg, p);
        cur = from_effective(eff, g, p);
      } else {
        cur = step_primitive(cur, dt, g, cfg, p, forcing);
      }
    } catch (const VacuumBlowUp& e) {
      if (unstable)
        throw NumericalFailure(
            "step exceeded the stability limit and broke down", e.time());
      tr.blowup = BlowUpInfo{e.time(), e.node(), e.rho()};
      return tr;
    } catch (const DomainError& e) {
      if (unstable)
        throw NumericalFailure(
            "step exceeded the stability limit and broke down", cur.time + dt);
      throw;
    } catch (const NumericalFailure&) {
      throw;
    }
    if (hit) cur.time = target;
    if (effective) eff.time = cur.time;

    // trapezoid in time over the step
    const StepIntegrals rate = rates(cur);
    acc.energy_dissipation += 0.5 * dt * (prev.energy_dissipation + rate.energy_dissipation);
    acc.bd_dissipation += 0.5 * dt * (prev.bd_dissipation + rate.bd_dissipation);
    acc.rho_max_power += 0.5 * dt * (prev.rho_max_power + rate.rho_max_power);
    prev = rate;
    ++tr.steps;
    tr.max_dt = std::max(tr.max_dt, dt);

    if (hit) {
      tr.snapshots.push_back(cur);
      tr.integrals.push_back(acc);
      ++k;
      if (target >= cfg.t_end) break;
    }
  }
  return tr;
}

}  // namespace nsdv
