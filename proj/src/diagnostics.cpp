#include "nsdv/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "nsdv/effective.hpp"
#include "nsdv/errors.hpp"
#include "nsdv/lagrangian.hpp"

namespace nsdv {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double max_of(const std::vector<double>& f) {
  return *std::max_element(f.begin(), f.end());
}

double min_of(const std::vector<double>& f) {
  return *std::min_element(f.begin(), f.end());
}

double sum_sq(const std::vector<double>& f, double dx) {
  double s = 0.0;
  for (double x : f) s += x * x;
  return s * dx;
}

}  // namespace

std::string flag_string(std::uint32_t mask) {
  static const std::pair<std::uint32_t, const char*> names[] = {
      {kFlagEnergy, "energy"},   {kFlagBd, "bd"},         {kFlagYEnvelope, "y_env"},
      {kFlagOleinik, "oleinik"}, {kFlagVacuum, "vacuum"}, {kFlagW1Sign, "w1_sign"},
      {kFlagBlowUp, "blowup"},
  };
  std::string out;
  for (const auto& [bit, name] : names) {
    if (!(mask & bit)) continue;
    if (!out.empty()) out += '+';
    out += name;
  }
  return out.empty() ? "none" : out;
}

std::uint32_t DiagnosticSeries::all_flags() const {
  std::uint32_t m = 0;
  for (auto f : flags) m |= f;
  return m;
}

double energy(const FluidState& s, const Grid1D& g, const ModelParams& p) {
  check_state(s, g);
  double e = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    e += 0.5 * s.rho[i] * s.u[i] * s.u[i] + internal_energy(s.rho[i], p);
  return e * g.dx();
}

double energy_dissipation(const FluidState& s, const Grid1D& g,
                          const ModelParams& p) {
  check_state(s, g);
  const auto du = ddx(s.u, g);
  double d = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    d += viscosity(s.rho[i], p) * du[i] * du[i];
  return d * g.dx();
}

double bd_entropy(const FluidState& s, const Grid1D& g, const ModelParams& p) {
  const auto v = effective_velocity(s, g, p);
  double e = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    e += 0.5 * s.rho[i] * v[i] * v[i] + internal_energy(s.rho[i], p);
  return e * g.dx();
}

double bd_dissipation(const FluidState& s, const Grid1D& g,
                      const ModelParams& p) {
  check_state(s, g);
  const auto dr = ddx(s.rho, g);
  double d = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double rho = s.rho[i];
    const double dp = p.gamma() * std::pow(rho, p.gamma() - 1.0);
    d += viscosity(rho, p) * dp / (rho * rho) * dr[i] * dr[i];
  }
  return d * g.dx();
}

double bv_norm(std::span<const double> v, const Grid1D& g, double half_window) {
  if (v.size() != g.size()) throw ShapeError("bv_norm: field length does not match grid");
  if (!(half_window > 0.0) || half_window > g.half_length() * (1.0 + 1e-12))
    throw InputError("bv_norm: window must lie inside the domain");
  double tv = 0.0;
  const double lim = half_window * (1.0 + 1e-12);
  for (std::size_t i = 0; i + 1 < g.size(); ++i)
    if (std::abs(g.x(i)) <= lim && std::abs(g.x(i + 1)) <= lim)
      tv += std::abs(v[i + 1] - v[i]);
  return tv;
}

double sigma_weight(double t) { return std::min(1.0, std::max(0.0, t)); }

std::vector<double> hoff_A(const Trajectory& tr) {
  const auto& g = tr.grid;
  const auto& p = tr.params;
  std::vector<double> out;
  double integral = 0.0;
  for (std::size_t k = 0; k < tr.snapshots.size(); ++k) {
    const auto& s = tr.snapshots[k];
    const double t = s.time;
    if (k > 0) {
      const auto& sp = tr.snapshots[k - 1];
      const auto ud = convective_derivative(sp, g, p);
      double q = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) q += sp.rho[i] * ud[i] * ud[i];
      integral += sigma_weight(sp.time) * q * g.dx() * (t - sp.time);
    }
    out.push_back(0.5 * sigma_weight(t) * energy_dissipation(s, g, p) + integral);
  }
  return out;
}

std::vector<double> hoff_B(const Trajectory& tr) {
  const auto& g = tr.grid;
  const auto& p = tr.params;
  std::vector<double> out;
  double integral = 0.0;
  for (std::size_t k = 0; k < tr.snapshots.size(); ++k) {
    const auto& s = tr.snapshots[k];
    const double t = s.time;
    if (k > 0) {
      const auto& sp = tr.snapshots[k - 1];
      const auto dud = ddx(convective_derivative(sp, g, p), g);
      double q = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i)
        q += viscosity(sp.rho[i], p) * dud[i] * dud[i];
      integral += sigma_weight(sp.time) * q * g.dx() * (t - sp.time);
    }
    const auto ud = convective_derivative(s, g, p);
    double q = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) q += s.rho[i] * ud[i] * ud[i];
    out.push_back(0.5 * sigma_weight(t) * q * g.dx() + integral);
  }
  return out;
}

YEnvelope y_comparison_ode(const Trajectory& tr) {
  const auto& p = tr.params;
  YEnvelope env;
  for (const auto& s : tr.snapshots) env.times.push_back(s.time);
  if (p.log_branch()) {
    env.available = false;
    env.y_env.assign(env.times.size(), kNaN);
    return env;
  }
  env.available = true;
  const double e = p.gamma() - p.alpha() - 1.0;
  env.c_gamma = std::max(0.0, p.gamma() * p.gamma() / e);
  env.y_m0 = max_of(effective_pressure(tr.snapshots.front(), tr.grid, p));
  for (std::size_t k = 0; k < tr.snapshots.size(); ++k)
    env.y_env.push_back(env.y_m0 + env.c_gamma * tr.integrals[k].rho_max_power);
  return env;
}

std::vector<double> vacuum_comparison(std::span<const double> times,
                                      std::span<const double> c, double z0,
                                      const ModelParams& p) {
  const double a = p.alpha() + 1.0 - p.gamma();
  if (!(a > 0.0))
    throw InputError("vacuum comparison requires gamma < alpha + 1");
  if (times.size() != c.size())
    throw ShapeError("vacuum_comparison: times and c differ in length");
  const double coef = p.gamma() / a;
  auto rhs = [&](double z) { return coef * std::pow(std::max(z, 0.0), a); };
  std::vector<double> out;
  double z = z0;
  out.push_back(z);
  constexpr int kSub = 64;
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double h = (times[k] - times[k - 1]) / kSub;
    for (int s = 0; s < kSub; ++s) {
      const double w0 = static_cast<double>(s) / kSub;
      const double wm = (s + 0.5) / kSub;
      const double w1 = static_cast<double>(s + 1) / kSub;
      const double c0 = (1.0 - w0) * c[k - 1] + w0 * c[k];
      const double cm = (1.0 - wm) * c[k - 1] + wm * c[k];
      const double c1 = (1.0 - w1) * c[k - 1] + w1 * c[k];
      const double k1 = c0 + rhs(z);
      const double k2 = cm + rhs(z + 0.5 * h * k1);
      const double k3 = cm + rhs(z + 0.5 * h * k2);
      const double k4 = c1 + rhs(z + h * k3);
      z += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    out.push_back(z);
  }
  return out;
}

bool constantin_condition(const FluidState& initial, const Grid1D& g,
                          const ModelParams& p) {
  if (!(p.alpha() > 1.0 && p.gamma() >= p.alpha() &&
        p.gamma() <= p.alpha() + 1.0))
    return false;
  const auto du = ddx(initial.u, g);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (du[i] > std::pow(initial.rho[i], p.gamma() - p.alpha()) + 1e-12)
      return false;
  return true;
}

DiagnosticSeries evaluate_monitors(const Trajectory& tr,
                                   const MonitorOptions& opt) {
  const auto& g = tr.grid;
  const auto& p = tr.params;
  DiagnosticSeries d;
  const double tol = opt.tol_dx_factor * g.dx();
  d.tolerance = tol;
  const double window = opt.bv_half_window > 0.0 ? opt.bv_half_window : g.half_length();

  for (std::size_t k = 0; k < tr.snapshots.size(); ++k) {
    const auto& s = tr.snapshots[k];
    const auto f = effective_fields(s, g, p);
    d.times.push_back(s.time);
    d.energy.push_back(energy(s, g, p));
    d.energy_diss.push_back(tr.integrals[k].energy_dissipation);
    d.bd_entropy.push_back(bd_entropy(s, g, p));
    d.bd_diss.push_back(tr.integrals[k].bd_dissipation);
    d.y_max.push_back(max_of(f.y));
    d.oleinik_slope.push_back(max_of(ddx(f.v, g)));
    d.rho_max.push_back(max_of(s.rho));
    d.inv_rho_max.push_back(1.0 / min_of(s.rho));
    d.bv_norm_v.push_back(bv_norm(f.v, g, window));
    d.w1_max.push_back(max_of(f.w1));
  }
  d.hoff_A = hoff_A(tr);
  d.hoff_B = hoff_B(tr);

  const auto env = y_comparison_ode(tr);
  d.y_env_available = env.available;
  d.y_env = env.y_env;
  const std::size_t nt = d.times.size();
  d.oleinik_envelope.assign(nt, kNaN);
  d.z_comparison.assign(nt, kNaN);
  if (env.available) {
    for (std::size_t k = 0; k < nt; ++k) {
      const double rmin = 1.0 / d.inv_rho_max[k];
      const double q = env.y_env[k] - f2(rmin, p);
      d.oleinik_envelope[k] = (q >= 0.0 ? d.rho_max[k] : rmin) * q;
    }
    if (p.gamma() < p.alpha() + 1.0) {
      d.vacuum_comparison_available = true;
      d.z_comparison = vacuum_comparison(d.times, env.y_env, d.inv_rho_max[0], p);
    }
  }
  d.w1_sign_checked = constantin_condition(tr.snapshots.front(), g, p);

  d.flags.assign(nt, 0u);
  for (std::size_t k = 0; k < nt; ++k) {
    const double t = d.times[k];
    std::uint32_t m = 0;
    if (d.energy[k] + d.energy_diss[k] >
        d.energy[0] * (1.0 + opt.balance_rel) + tol * t)
      m |= kFlagEnergy;
    if (d.bd_entropy[k] + d.bd_diss[k] >
        d.bd_entropy[0] * (1.0 + opt.balance_rel) + tol * t)
      m |= kFlagBd;
    if (env.available) {
      if (d.y_max[k] > d.y_env[k] + tol) m |= kFlagYEnvelope;
      if (d.oleinik_slope[k] > d.oleinik_envelope[k] + tol) m |= kFlagOleinik;
    }
    if (d.vacuum_comparison_available && d.inv_rho_max[k] > d.z_comparison[k] + tol)
      m |= kFlagVacuum;
    if (d.w1_sign_checked && d.w1_max[k] > tol) m |= kFlagW1Sign;
    if (d.inv_rho_max[k] >= 1.0 / kRhoFloor) m |= kFlagBlowUp;
    d.flags[k] = m;
  }
  if (tr.blowup && nt > 0) d.flags.back() |= kFlagBlowUp;
  return d;
}

namespace {

Trajectory checked_run(const FluidState& init, const SolverConfig& cfg,
                       const Grid1D& g, const ModelParams& p,
                       const std::string& tag) {
  try {
    auto tr = run(init, cfg, g, p);
    if (tr.blowup)
      throw VacuumBlowUp(tr.blowup->time, tr.blowup->node, tr.blowup->rho,
                         "twin " + tag + ": ");
    return tr;
  } catch (const NumericalFailure& e) {
    throw NumericalFailure("twin " + tag + ": " + e.what(), e.time());
  }
}

}  // namespace

TwinReport twin_run_stability(const FluidState& initial, const SolverConfig& cfg,
                              const Grid1D& g, const ModelParams& p,
                              double epsilon) {
  check_state(initial, g);
  SolverConfig c = cfg;
  c.formulation = Formulation::Primitive;
  FluidState pert = initial;
  for (std::size_t i = 1; i + 1 < g.size(); ++i)
    pert.u[i] += epsilon * std::exp(-g.x(i) * g.x(i));

  auto fut = std::async(std::launch::async,
                        [&] { return checked_run(pert, c, g, p, "perturbed"); });
  Trajectory base = checked_run(initial, c, g, p, "base");
  Trajectory other = fut.get();

  const auto flow1 = integrate_flow(other);
  const auto flow2 = integrate_flow(base);
  const auto& rho0 = initial.rho;
  const std::size_t nt = base.snapshots.size();
  const double dx = g.dx();

  struct Pulled {
    std::vector<double> u1, u2, k1, k2, r1, r2;
  };
  std::vector<Pulled> pulled(nt);
  double kappa = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < nt; ++k) {
    const double t = base.snapshots[k].time;
    auto& q = pulled[k];
    q.u1 = to_lagrangian(other.snapshots[k].u, flow1, t, g);
    q.u2 = to_lagrangian(base.snapshots[k].u, flow2, t, g);
    q.r1 = to_lagrangian(other.snapshots[k].rho, flow1, t, g);
    q.r2 = to_lagrangian(base.snapshots[k].rho, flow2, t, g);
    q.k1.resize(g.size());
    q.k2.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      q.k1[i] = q.r1[i] * viscosity(q.r1[i], p) / rho0[i];
      q.k2[i] = q.r2[i] * viscosity(q.r2[i], p) / rho0[i];
      kappa = std::min({kappa, q.k1[i], q.k2[i]});
    }
  }

  TwinReport rep;
  rep.epsilon = epsilon;
  rep.kappa = kappa;
  double diss = 0.0, gint = 0.0, prev_dd = 0.0, prev_gg = 0.0;
  double w0 = 0.0;
  rep.crossing_time = base.snapshots.back().time;
  bool crossed = false;
  for (std::size_t k = 0; k < nt; ++k) {
    const double t = base.snapshots[k].time;
    const auto& q = pulled[k];
    std::vector<double> du(g.size()), g1(g.size()), g2(g.size());
    const auto dx2 = ddx(q.u2, g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      du[i] = q.u1[i] - q.u2[i];
      g1[i] = pressure(q.r2[i], p) - pressure(q.r1[i], p);
      g2[i] = (q.k1[i] - q.k2[i]) * dx2[i];
    }
    const double dd = sum_sq(ddx(du, g), dx);
    const double gg = sum_sq(g1, dx) + sum_sq(g2, dx);
    if (k > 0) {
      const double h = t - base.snapshots[k - 1].time;
      diss += 0.5 * h * (dd + prev_dd);
      gint += 0.5 * h * (gg + prev_gg);
    }
    prev_dd = dd;
    prev_gg = gg;

    double l2 = 0.0, wl2 = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      l2 += du[i] * du[i];
      wl2 += rho0[i] * du[i] * du[i];
    }
    l2 = std::sqrt(l2 * dx);
    wl2 = std::sqrt(wl2 * dx);
    if (k == 0) w0 = wl2;

    rep.times.push_back(t);
    rep.du_l2.push_back(l2);
    rep.du_weighted.push_back(wl2);
    rep.dissipation.push_back(diss);
    const double lhs = 0.5 * wl2 * wl2 + 0.5 * kappa * diss;
    const double rhs = 0.5 * w0 * w0 + gint / kappa;
    rep.lhs.push_back(lhs);
    rep.rhs.push_back(rhs);
    const double kf = (t > 0.0 && diss > 0.0) ? gint / (kappa * t * diss) : 0.0;
    rep.k_factor.push_back(kf);
    if (!crossed && t * kf >= 0.5 * kappa) {
      crossed = true;
      rep.crossing_time = t;
    }
    if (!crossed && lhs > rhs * (1.0 + 1e-9) + 1e-300) rep.gronwall_holds = false;
  }
  return rep;
}

}  // namespace nsdv
