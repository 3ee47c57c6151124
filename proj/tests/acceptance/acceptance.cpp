// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "nsdv/config.hpp"
#include "nsdv/diagnostics.hpp"
#include "nsdv/initdata.hpp"
#include "nsdv/lagrangian.hpp"
#include "nsdv/solver.hpp"
#include "nsdv/studies.hpp"

#ifndef NSDV_CONFIG_DIR
#define NSDV_CONFIG_DIR "configs"
#endif

using namespace nsdv;

namespace {

// Tolerances and budgets.
constexpr double kFdRelTol = 1e-6;
constexpr double kEquilibriumTol = 1e-12;
constexpr int kEquilibriumSteps = 1000;
constexpr double kMassDriftTol = 1e-10;
constexpr double kMassHalfLength = 20.0;
constexpr double kDxFactor = 10.0;
constexpr double kBalanceRel = 1e-3;
constexpr double kMassIdentityC = 5.0;
constexpr double kMinCrossOrder = 1.0;
constexpr double kMinOrderCfl = 1.0;
constexpr double kMinOrderDx2 = 1.8;
constexpr double kTwinEpsilon = 1e-6;
constexpr double kTwinBoundFactor = 10.0;
constexpr double kTwinLinearity = 0.2;

const std::vector<std::string> kRegression = {"smooth_bump", "rarefaction", "steepening",
                                              "constantin"};

struct Result {
  bool pass = false;
  std::string detail;
};

char buf[512];

template <class... A>
std::string fmt(const char* f, A... a) {
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

ScenarioConfig scenario(const std::string& name) {
  return load_config(std::string(NSDV_CONFIG_DIR) + "/" + name + ".cfg");
}

struct ScenarioRun {
  ScenarioConfig cfg;
  Trajectory tr;
  DiagnosticSeries d;
};

// Regression scenarios are shared by criteria 4 to 7.
const ScenarioRun& regression(const std::string& name) {
  static std::map<std::string, ScenarioRun> cache;
  auto it = cache.find(name);
  if (it == cache.end()) {
    auto c = scenario(name);
    auto tr = run(build_initial(c).state, c.solver, c.grid(), c.model());
    MonitorOptions opt;
    opt.tol_dx_factor = kDxFactor;
    opt.balance_rel = kBalanceRel;
    auto d = evaluate_monitors(tr, opt);
    it = cache.emplace(name, ScenarioRun{c, std::move(tr), std::move(d)}).first;
  }
  return it->second;
}

double max_abs_dev(const std::vector<double>& a, double ref) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x - ref));
  return m;
}

Result c1_constitutive() {
  double worst = 0.0;
  int cases = 0;
  for (double a : {0.6, 0.75, 1.0, 1.5, 2.0})
    for (double g : {1.0, 1.4, 2.0, 3.0}) {
      if (g < std::max(1.0, a)) continue;
      const auto p = ModelParams::create(a, g, 1.0);
      ++cases;
      for (double r : {0.05, 0.3, 0.8, 1.0, 1.7, 4.0, 25.0}) {
        const double h = 1e-5 * r;
        const double prod = f1f2(r, p), ref = f1(r, p) * f2(r, p);
        worst = std::max(worst, std::abs(prod - ref) / std::max(1e-300, std::abs(ref)));
        const double df2 = (f2(r + h, p) - f2(r - h, p)) / (2 * h);
        worst = std::max(worst, std::abs(r * df2 - f1(r, p) / r) / (f1(r, p) / r));
        const double dphi = (phi(r + h, p) - phi(r - h, p)) / (2 * h);
        const double mu = viscosity(r, p) / (r * r);
        worst = std::max(worst, std::abs(dphi - mu) / mu);
      }
    }
  return {worst <= kFdRelTol, fmt("%d parameter pairs, worst rel err %.2e", cases, worst)};
}

Result c2_equilibrium() {
  const Grid1D g(257, 10.0);
  const auto p = ModelParams::create(0.75, 2.0, 10.0);
  double dev = 0.0;
  for (auto diff : {DiffusionTreatment::Explicit, DiffusionTreatment::SemiImplicit}) {
    SolverConfig cfg;
    cfg.diffusion = diff;
    FluidState s = equilibrium_state(g);
    EffectiveState e = to_effective(s, g, p);
    const double dt = stable_dt(s, g, cfg, p);
    for (int k = 0; k < kEquilibriumSteps; ++k) {
      s = step_primitive(s, dt, g, cfg, p);
      e = step_effective(e, dt, g, cfg, p);
    }
    dev = std::max({dev, max_abs_dev(s.rho, 1.0), max_abs_dev(s.u, 0.0),
                    max_abs_dev(e.rho, 1.0), max_abs_dev(e.v, 0.0)});
  }
  auto ls = lagrangian_initial(equilibrium_state(g), g);
  const auto r0 = cell_density(equilibrium_state(g));
  SolverConfig cfg;
  const double dt = stable_dt(equilibrium_state(g), g, cfg, p);
  for (int k = 0; k < kEquilibriumSteps; ++k) ls = step_lagrangian(ls, dt, r0, g, p);
  dev = std::max({dev, max_abs_dev(ls.rho, 1.0), max_abs_dev(ls.u, 0.0)});
  return {dev <= kEquilibriumTol, fmt("%d steps per solver, max deviation %.2e", kEquilibriumSteps, dev)};
}

// Velocity tails spread viscously to x = +-10 by t = 1 in the rarefaction and
// steepening cases and leak through the pinned boundary nodes; a half-length
// of 20 keeps the far field quiet so the drift measures the scheme itself.
Result c3_mass() {
  bool ok = true;
  std::string detail;
  for (const auto& name : kRegression) {
    auto c = scenario(name);
    c.n_cells = 1024;
    c.half_length = kMassHalfLength;
    c.solver.t_end = 1.0;
    const auto tr = run(build_initial(c).state, c.solver, c.grid(), c.model());
    const double dx = c.grid().dx();
    auto mass = [dx](const FluidState& s) {
      return std::accumulate(s.rho.begin(), s.rho.end(), 0.0) * dx;
    };
    const double m0 = mass(tr.snapshots.front());
    double drift = 0.0;
    for (const auto& s : tr.snapshots) drift = std::max(drift, std::abs(mass(s) - m0) / m0);
    ok = ok && !tr.blowup && tr.snapshots.back().time == 1.0 && drift <= kMassDriftTol;
    detail += fmt("%s %.2e; ", name.c_str(), drift);
  }
  return {ok, "N=1024 T=1 L=20, relative drift " + detail};
}

Result c4_balances() {
  bool ok = true;
  std::string detail;
  for (const auto& name : kRegression) {
    const auto& r = regression(name);
    const double tol = r.d.tolerance;
    double worst_e = -1e300, worst_b = -1e300, ex_e = -1e300, ex_b = -1e300;
    for (std::size_t k = 0; k < r.d.times.size(); ++k) {
      const double t = r.d.times[k];
      const double be = r.d.energy[0] * (1 + kBalanceRel) + tol * t;
      const double bb = r.d.bd_entropy[0] * (1 + kBalanceRel) + tol * t;
      worst_e = std::max(worst_e, (r.d.energy[k] + r.d.energy_diss[k]) / be);
      worst_b = std::max(worst_b, (r.d.bd_entropy[k] + r.d.bd_diss[k]) / bb);
      ex_e = std::max(ex_e, (r.d.energy[k] + r.d.energy_diss[k]) / r.d.energy[0] - 1.0);
      ex_b = std::max(ex_b, (r.d.bd_entropy[k] + r.d.bd_diss[k]) / r.d.bd_entropy[0] - 1.0);
    }
    ok = ok && worst_e <= 1.0 && worst_b <= 1.0 && !r.tr.blowup;
    detail += fmt("%s E/bound %.4f (excess %.1e) BD/bound %.4f (excess %.1e); ", name.c_str(),
                  worst_e, ex_e, worst_b, ex_b);
  }
  return {ok, detail};
}

Result c5_y_envelope() {
  bool ok = true;
  std::string detail;
  for (const auto& name : kRegression) {
    const auto& r = regression(name);
    const auto p = r.cfg.model();
    if (p.log_branch()) continue;
    if (!r.d.y_env_available) {
      ok = false;
      detail += name + " envelope missing; ";
      continue;
    }
    double margin = 1e300;
    for (std::size_t k = 0; k < r.d.times.size(); ++k)
      margin = std::min(margin, r.d.y_env[k] + r.d.tolerance - r.d.y_max[k]);
    bool flat_ok = true;
    if (p.gamma() < p.alpha() + 1.0)
      for (double y : r.d.y_env) flat_ok = flat_ok && y == r.d.y_env.front();
    ok = ok && margin >= 0.0 && flat_ok;
    detail += fmt("%s margin %.3g%s; ", name.c_str(), margin,
                  p.gamma() < p.alpha() + 1.0 ? (flat_ok ? " flat" : " NOT flat") : "");
  }
  return {ok, detail};
}

Result c6_oleinik() {
  bool ok = true;
  std::string detail;
  for (const auto& name : kRegression) {
    const auto& r = regression(name);
    if (!r.d.y_env_available) continue;
    double margin = 1e300;
    for (std::size_t k = 0; k < r.d.times.size(); ++k)
      margin = std::min(margin, r.d.oleinik_envelope[k] + r.d.tolerance - r.d.oleinik_slope[k]);
    ok = ok && margin >= 0.0;
    detail += fmt("%s margin %.3g; ", name.c_str(), margin);
  }
  return {ok, detail};
}

Result c7_vacuum() {
  bool ok = true;
  std::string detail;
  for (const auto& name : kRegression) {
    const auto& r = regression(name);
    double rmin = 1e300;
    for (const auto& s : r.tr.snapshots) rmin = std::min(rmin, *std::min_element(s.rho.begin(), s.rho.end()));
    ok = ok && !r.tr.blowup && rmin > kRhoFloor;
    if (r.d.vacuum_comparison_available) {
      double margin = 1e300;
      for (std::size_t k = 0; k < r.d.times.size(); ++k)
        margin = std::min(margin, r.d.z_comparison[k] + r.d.tolerance - r.d.inv_rho_max[k]);
      ok = ok && margin >= 0.0;
      detail += fmt("%s z-margin %.3g min rho %.3g; ", name.c_str(), margin, rmin);
    } else {
      detail += fmt("%s min rho %.3g; ", name.c_str(), rmin);
    }
  }
  return {ok, detail};
}

Result c8_mass_identity() {
  double cmax = 0.0, jmin = 1e300, lag_err = 0.0;
  bool ok = true;
  for (std::size_t n : {256, 512, 1024}) {
    auto c = scenario("smooth_bump");
    c.n_cells = n;
    c.solver.t_end = 0.5;
    c.solver.output_cadence = 0.01;
    const auto g = c.grid();
    const auto init = build_initial(c).state;
    const auto tr = run(init, c.solver, g, c.model());
    const auto flow = integrate_flow(tr);
    double err = 0.0;
    for (std::size_t k = 0; k < flow.times.size(); ++k) {
      const auto rl = to_lagrangian(tr.snapshots[k].rho, flow, flow.times[k], g);
      for (std::size_t i = 1; i + 1 < n; ++i) {
        jmin = std::min(jmin, flow.jacobian[k][i]);
        err = std::max(err, std::abs(flow.jacobian[k][i] * rl[i] - init.rho[i]));
      }
    }
    cmax = std::max(cmax, err / (g.dx() + tr.max_dt));

    const auto lag = run_lagrangian(init, c.solver, g, c.model());
    const auto r0 = cell_density(init);
    for (const auto& s : lag.states)
      for (std::size_t i = 0; i + 1 < n; ++i)
        lag_err = std::max(lag_err, std::abs((s.x[i + 1] - s.x[i]) / g.dx() * s.rho[i] - r0[i]));
    jmin = std::min(jmin, lag.min_jacobian);
    ok = ok && lag.min_jacobian > 0.0;
  }
  ok = ok && cmax <= kMassIdentityC && jmin > 0.0 && lag_err <= 1e-10;
  return {ok, fmt("flow-map C=%.3g, staggered identity err %.2e, min jacobian %.4f", cmax,
                  lag_err, jmin)};
}

Result c9_cross() {
  const auto t = cross_formulation(scenario("smooth_bump"), {256, 512, 1024}, 0.5);
  const double order = t.min_order();
  return {order >= kMinCrossOrder,
          fmt("min pairwise order %.3f, max distance/dx %.3g, finest distances %.2e %.2e %.2e",
              order, t.max_constant(), t.rows.back().prim_eff, t.rows.back().prim_lag,
              t.rows.back().eff_lag)};
}

Result c10_mms() {
  const auto a = mms_convergence("manufactured-1", 4, DtMode::Cfl);
  const auto b = mms_convergence("manufactured-1", 4, DtMode::DxSquared);
  const bool ok = a.monotone() && b.monotone() && a.min_order() >= kMinOrderCfl &&
                  b.min_order() >= kMinOrderDx2;
  return {ok, fmt("CFL-step order %.3f, dt~dx^2 order %.3f, finest error %.2e", a.min_order(),
                  b.min_order(), b.rows.back().error)};
}

Result c11_twin() {
  auto c = scenario("smooth_bump");
  c.solver.t_end = 0.1;
  c.solver.output_cadence = 0.01;
  const auto init = build_initial(c).state;
  const auto a = twin_run_stability(init, c.solver, c.grid(), c.model(), kTwinEpsilon);
  const auto b = twin_run_stability(init, c.solver, c.grid(), c.model(), 10 * kTwinEpsilon);
  double worst = 0.0, lin = 0.0;
  for (std::size_t k = 0; k < a.times.size(); ++k) {
    worst = std::max(worst, a.du_l2[k] / kTwinEpsilon);
    lin = std::max(lin, std::abs(b.du_l2[k] / (10 * a.du_l2[k]) - 1.0));
  }
  return {worst <= kTwinBoundFactor && lin <= kTwinLinearity,
          fmt("max ||du||/eps %.3f, linearity deviation %.2e", worst, lin)};
}

Result c12_constantin() {
  const auto& r = regression("constantin");
  const auto p = r.cfg.model();
  const auto& g = r.tr.grid;
  const bool hyp = constantin_condition(r.tr.snapshots.front(), g, p);
  double wmax = -1e300;
  for (double w : r.d.w1_max) wmax = std::max(wmax, w);
  return {hyp && !r.tr.blowup && wmax <= kDxFactor * g.dx(),
          fmt("hypothesis %s, max w1 %.3g vs tol %.3g", hyp ? "holds" : "fails", wmax,
              kDxFactor * g.dx())};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Result()> fn;
  };
  const std::vector<Criterion> all = {
      {1, "constitutive identities", 1, c1_constitutive},
      {2, "equilibrium fixed point", 5, c2_equilibrium},
      {3, "primitive mass conservation", 30, c3_mass},
      {4, "energy and BD balances", 300, c4_balances},
      {5, "effective pressure envelope", 300, c5_y_envelope},
      {6, "one-sided Lipschitz persistence", 300, c6_oleinik},
      {7, "vacuum bound", 300, c7_vacuum},
      {8, "Lagrangian mass identity", 300, c8_mass_identity},
      {9, "cross-formulation agreement", 600, c9_cross},
      {10, "manufactured-solution convergence", 600, c10_mms},
      {11, "twin-run stability", 300, c11_twin},
      {12, "effective flux sign persistence", 120, c12_constantin},
  };
  int failures = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
      r = c.fn();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = r.pass && secs <= c.budget_s;
    failures += !ok;
    std::printf("%s criterion %d (%s): %s [%.2f s of %.0f s]\n", ok ? "PASS" : "FAIL", c.id,
                c.name, r.detail.c_str(), secs, c.budget_s);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failures, all.size());
  return failures == 0 ? 0 : 1;
}
