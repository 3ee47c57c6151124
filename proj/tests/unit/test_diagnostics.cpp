#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nsdv/diagnostics.hpp"
#include "nsdv/errors.hpp"

using namespace nsdv;

TEST_CASE("energy quadrature") {
  const Grid1D g(2001, 10.0);
  const auto p = ModelParams::create(0.75, 2.0, 10.0);
  FluidState s = equilibrium_state(g);
  CHECK(energy(s, g, p) == 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) s.u[i] = std::exp(-g.x(i) * g.x(i));
  // 1/2 int exp(-2x^2) = sqrt(pi/2)/2
  CHECK(energy(s, g, p) == doctest::Approx(0.5 * std::sqrt(std::numbers::pi / 2)).epsilon(1e-8));
  // flat density: v = u, so the BD entropy equals the energy
  CHECK(bd_entropy(s, g, p) == doctest::Approx(energy(s, g, p)));
  CHECK(bd_dissipation(s, g, p) == 0.0);
  CHECK(energy_dissipation(s, g, p) > 0.0);
}

TEST_CASE("flag names") {
  CHECK(flag_string(0) == "none");
  CHECK(flag_string(kFlagEnergy | kFlagBd) == "energy+bd");
  CHECK(flag_string(kFlagBlowUp) == "blowup");
}

TEST_CASE("sigma weight and BV window") {
  CHECK(sigma_weight(0.0) == 0.0);
  CHECK(sigma_weight(0.5) == 0.5);
  CHECK(sigma_weight(3.0) == 1.0);
  const Grid1D g(41, 2.0);
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = g.x(i);
  CHECK(bv_norm(v, g, 1.0) == doctest::Approx(2.0));
  CHECK(bv_norm(v, g, 2.0) == doctest::Approx(4.0));
  CHECK_THROWS_AS(bv_norm(v, g, 3.0), InputError);
}

TEST_CASE("vacuum comparison ODE, linear case") {
  // alpha = gamma = 1: z' = c + z
  const auto p = ModelParams::create(1.0, 1.0, 1.0);
  const std::vector<double> t{0.0, 0.5, 1.0}, c{0.0, 0.0, 0.0};
  const auto z = vacuum_comparison(t, c, 1.0, p);
  CHECK(z[1] == doctest::Approx(std::exp(0.5)).epsilon(1e-10));
  CHECK(z[2] == doctest::Approx(std::numbers::e).epsilon(1e-10));
  CHECK_THROWS(vacuum_comparison(t, c, 1.0, ModelParams::create(1.0, 2.5, 1.0)));
}

TEST_CASE("Constantin hypothesis") {
  const Grid1D g(65, 5.0);
  CHECK(constantin_condition(equilibrium_state(g), g, ModelParams::create(1.5, 2.0, 5.0)));
  CHECK_FALSE(constantin_condition(equilibrium_state(g), g, ModelParams::create(0.75, 2.0, 5.0)));
}

TEST_CASE("monitors are quiet at equilibrium") {
  const Grid1D g(129, 10.0);
  const auto p = ModelParams::create(0.75, 2.0, 10.0);
  SolverConfig cfg;
  cfg.t_end = 0.5;
  const auto tr = run(equilibrium_state(g), cfg, g, p);
  const auto d = evaluate_monitors(tr);
  CHECK(d.all_flags() == 0u);
  CHECK(d.times.size() == 6);
  for (double a : hoff_A(tr)) CHECK(a == doctest::Approx(0.0));
  for (double b : hoff_B(tr)) CHECK(b == doctest::Approx(0.0));

  // C_gamma = gamma^2 / (gamma - alpha - 1) = 16, rho_max = 1
  const auto env = y_comparison_ode(tr);
  REQUIRE(env.available);
  CHECK(env.c_gamma == doctest::Approx(16.0));
  CHECK(env.y_m0 == doctest::Approx(8.0));
  CHECK(env.y_env.back() == doctest::Approx(8.0 + 16.0 * 0.5));
}

TEST_CASE("twin run is linear in the perturbation") {
  const Grid1D g(257, 10.0);
  const auto p = ModelParams::create(0.75, 2.0, 10.0);
  SolverConfig cfg;
  cfg.t_end = 0.05;
  cfg.output_cadence = 0.01;
  const auto a = twin_run_stability(equilibrium_state(g), cfg, g, p, 1e-6);
  const auto b = twin_run_stability(equilibrium_state(g), cfg, g, p, 2e-6);
  REQUIRE(a.times.size() == b.times.size());
  for (std::size_t k = 0; k < a.times.size(); ++k) {
    CHECK(b.du_l2[k] / a.du_l2[k] == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(a.lhs[k] <= a.rhs[k] * (1.0 + 1e-9));
  }
  CHECK(a.gronwall_holds);
}
