#include <cmath>
#include <numeric>

#include "doctest.h"
#include "nsdv/config.hpp"
#include "nsdv/errors.hpp"
#include "nsdv/initdata.hpp"
#include "nsdv/solver.hpp"

using namespace nsdv;

namespace {

ScenarioConfig bump_config(std::size_t n) {
  ScenarioConfig c;
  c.n_cells = n;
  c.initial = init::SmoothBump{0.2, 1.0, 0.1};
  c.solver.t_end = 0.2;
  c.solver.output_cadence = 0.1;
  return c;
}

double mass(const FluidState& s, const Grid1D& g) {
  return std::accumulate(s.rho.begin(), s.rho.end(), 0.0) * g.dx();
}

}  // namespace

TEST_CASE("equilibrium is a fixed point of both Eulerian steps") {
  const Grid1D g(129, 10.0);
  const auto p = ModelParams::create(0.75, 2.0, 10.0);
  for (auto diff : {DiffusionTreatment::Explicit, DiffusionTreatment::SemiImplicit}) {
    SolverConfig cfg;
    cfg.diffusion = diff;
    FluidState s = equilibrium_state(g);
    EffectiveState e = to_effective(s, g, p);
    const double dt = stable_dt(s, g, cfg, p);
    for (int k = 0; k < 50; ++k) {
      s = step_primitive(s, dt, g, cfg, p);
      e = step_effective(e, dt, g, cfg, p);
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(std::abs(s.rho[i] - 1.0) <= 1e-12);
      CHECK(std::abs(s.u[i]) <= 1e-12);
      CHECK(std::abs(e.rho[i] - 1.0) <= 1e-12);
      CHECK(std::abs(e.v[i]) <= 1e-12);
    }
  }
}

TEST_CASE("primitive mass is conserved") {
  const auto c = bump_config(257);
  const auto g = c.grid();
  const auto tr = run(build_initial(c).state, c.solver, g, c.model());
  REQUIRE(tr.snapshots.size() == 3);
  const double m0 = mass(tr.snapshots.front(), g);
  CHECK(std::abs(mass(tr.snapshots.back(), g) - m0) <= 1e-12 * m0);
  CHECK(tr.snapshots.back().time == doctest::Approx(0.2));
}

TEST_CASE("effective round trip") {
  const auto c = bump_config(257);
  const auto g = c.grid();
  const auto p = c.model();
  const auto s = build_initial(c).state;
  const auto back = from_effective(to_effective(s, g, p), g, p);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(back.rho[i] == s.rho[i]);
    CHECK(back.u[i] == doctest::Approx(s.u[i]).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("damping alone is integrated exactly") {
  const Grid1D g(33, 1.0);
  const auto p = ModelParams::create(0.75, 2.0, 1.0);
  EffectiveState e{0.0, std::vector<double>(33, 2.0), std::vector<double>(33, 1.0)};
  SolverConfig cfg;
  const EffectiveStepOptions opt{true, true};
  for (int k = 0; k < 10; ++k) e = step_effective(e, 0.01, g, cfg, p, opt);
  const double expect = std::exp(-f1(2.0, p) * 0.1);
  for (double v : e.v) CHECK(v == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("stable_dt and config validation") {
  const Grid1D g(129, 10.0);
  const auto p = ModelParams::create(0.75, 2.0, 10.0);
  SolverConfig cfg;
  const double semi = stable_dt(equilibrium_state(g), g, cfg, p);
  cfg.diffusion = DiffusionTreatment::Explicit;
  const double expl = stable_dt(equilibrium_state(g), g, cfg, p);
  CHECK(semi > 0.0);
  CHECK(expl > 0.0);
  CHECK(expl <= semi);

  SolverConfig bad;
  bad.cfl_number = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = SolverConfig{};
  bad.t_end = -1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("oversized fixed step is a numerical failure") {
  auto c = bump_config(513);
  c.solver.diffusion = DiffusionTreatment::Explicit;
  c.solver.fixed_dt = 0.05;
  c.solver.t_end = 2.0;
  CHECK_THROWS_AS(run(build_initial(c).state, c.solver, c.grid(), c.model()),
                  NumericalFailure);
}

TEST_CASE("strong expansion ends the run at the density floor") {
  ScenarioConfig c;
  c.alpha = 1.0;
  c.gamma = 1.05;
  c.n_cells = 1024;
  c.initial = init::FromV0{"sawtooth", 4, 500.0, 0.0, 1.0};
  const auto tr = run(build_initial(c).state, c.solver, c.grid(), c.model());
  REQUIRE(tr.blowup.has_value());
  CHECK(tr.blowup->time > 0.0);
  CHECK(tr.blowup->time < 1.0);
  CHECK(tr.blowup->rho <= kRhoFloor);
}
