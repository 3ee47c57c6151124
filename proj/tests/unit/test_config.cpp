#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "nsdv/config.hpp"
#include "nsdv/errors.hpp"
#include "nsdv/format.hpp"
#include "nsdv/initdata.hpp"

using namespace nsdv;

namespace {

const char* kText = R"(# sample
[model]
alpha = 1.5
gamma = 2
half_length = 8

[grid]
n_cells = 300

[solver]
cfl = 0.3
t_end = 0.5
output_cadence = 0.1
formulation = effective
diffusion = explicit
dt_over_dx2 = 0.2

[initial_data]
kind = smooth_bump
amplitude = 0.2
width = 0.7
velocity = 0.05

[run]
seed = 42
noise = 0.001
)";

double max_slope(const std::vector<double>& v, double dx) {
  double c = -1e300;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) c = std::max(c, (v[i + 1] - v[i]) / dx);
  return c;
}

}  // namespace

TEST_CASE("parse a full config") {
  const auto c = parse_config(kText);
  CHECK(c.alpha == 1.5);
  CHECK(c.half_length == 8.0);
  CHECK(c.n_cells == 300);
  CHECK(c.solver.formulation == Formulation::Effective);
  CHECK(c.solver.diffusion == DiffusionTreatment::Explicit);
  REQUIRE(c.solver.dt_over_dx2.has_value());
  CHECK(*c.solver.dt_over_dx2 == 0.2);
  CHECK(c.seed == 42);
  const auto& b = std::get<init::SmoothBump>(c.initial);
  CHECK(b.width == 0.7);
  CHECK(std::string(initial_kind_name(c.initial)) == "smooth_bump");
}

TEST_CASE("round trip for every initial-data kind") {
  std::vector<InitialDataSpec> kinds{init::Equilibrium{},
                                     init::SmoothBump{0.3, 2.0, -0.1},
                                     init::ShockLike{0.4, 3.0, 1.5},
                                     init::Rarefaction{0.25, 1.75},
                                     init::FromV0{"ramp_down", 6, 0.1 + 0.2, 0.05, 1.3},
                                     init::Manufactured{"manufactured-0"}};
  for (const auto& k : kinds) {
    auto c = parse_config(kText);
    c.initial = k;
    c.solver.fixed_dt = 1.0 / 3.0;
    const auto text = serialize_config(c);
    CHECK(parse_config(text) == c);
    CHECK(serialize_config(parse_config(text)) == text);
  }
}

TEST_CASE("config hash") {
  const auto a = parse_config(kText);
  auto b = a;
  b.seed = 43;
  CHECK(config_hash(a).size() == 16);
  CHECK(config_hash(a) == config_hash(parse_config(serialize_config(a))));
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("[model]\nalpha = 1\nalpha = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[model]\nbogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[model\nalpha = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("alpha = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[model]\nalpha = one\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[model]\nalpha\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[initial_data]\nkind = vortex\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[solver]\nformulation = spectral\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/file.cfg"), ConfigError);

  ScenarioConfig wide;
  wide.initial = init::Rarefaction{0.5, 5.0};
  CHECK_THROWS_AS(validate_config(wide), ConfigError);
  ScenarioConfig bad_model;
  bad_model.alpha = 0.4;
  CHECK_THROWS_AS(validate_config(bad_model), ConfigError);
}

TEST_CASE("mollifier") {
  const Grid1D g(201, 4.0);
  const std::vector<double> flat(g.size(), 2.5);
  for (double v : mollify(flat, 4, g)) CHECK(v == doctest::Approx(2.5).epsilon(1e-14));
  std::vector<double> lin(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) lin[i] = g.x(i);
  const auto ml = mollify(lin, 4, g);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (std::abs(g.x(i)) < 3.0) CHECK(ml[i] == doctest::Approx(lin[i]).scale(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(mollify(flat, 0, g), InputError);
  const Grid1D small(21, 1.0);
  CHECK_THROWS_AS(mollify(std::vector<double>(21, 1.0), 1, small), InputError);
  CHECK_THROWS_AS(mollify(std::vector<double>(20, 1.0), 4, small), ShapeError);

  // one-sided slopes never grow under convolution
  for (const char* id : {"sawtooth", "ramp_down"}) {
    const auto raw = v0_profile(id, 2.0, g);
    for (int n : {2, 4, 8})
      CHECK(max_slope(mollify(raw, n, g), g.dx()) <= max_slope(raw, g.dx()) + 1e-12);
  }
  CHECK_THROWS_AS(v0_profile("zigzag", 1.0, g), InputError);
}

TEST_CASE("initial data") {
  ScenarioConfig c;
  c.n_cells = 257;
  auto eq = build_initial(c);
  CHECK(eq.oleinik_constant == 0.0);
  for (double v : eq.v0) CHECK(v == 0.0);

  c.initial = init::FromV0{"ramp_down", 4, 1.0, 0.0, 1.0};
  const auto fv = build_initial(c);
  // flat density: u0 = v0
  for (std::size_t i = 0; i < fv.v0.size(); ++i)
    CHECK(fv.state.u[i] == doctest::Approx(fv.v0[i]).scale(1.0));
  CHECK(fv.oleinik_constant > 0.0);

  for (const InitialDataSpec& k : {InitialDataSpec{init::SmoothBump{}}, InitialDataSpec{init::ShockLike{}},
                                   InitialDataSpec{init::Rarefaction{}},
                                   InitialDataSpec{init::FromV0{"sawtooth", 4, 1.0, 0.3, 1.0}}}) {
    c.initial = k;
    const auto s = build_initial(c).state;
    CHECK(s.rho.front() == 1.0);
    CHECK(s.rho.back() == 1.0);
    CHECK(s.u.front() == 0.0);
    CHECK(s.u.back() == 0.0);
  }

  c.initial = init::SmoothBump{};
  c.noise = 1e-3;
  c.seed = 7;
  const auto n1 = build_initial(c).state;
  const auto n2 = build_initial(c).state;
  CHECK(n1.u == n2.u);
  c.seed = 8;
  CHECK(build_initial(c).state.u != n1.u);
}

TEST_CASE("manufactured forcing") {
  const Grid1D g(65, 1.0);
  const auto p = ModelParams::create(0.75, 2.0, 1.0);
  const auto zero = manufactured_source("manufactured-0", 0.3, g, p);
  for (double m : zero.mass) CHECK(m == 0.0);
  for (double m : zero.momentum) CHECK(m == doctest::Approx(0.0));
  const auto late = manufactured_source("manufactured-1", 40.0, g, p);
  for (double m : late.momentum) CHECK(std::abs(m) < 1e-12);
  CHECK_THROWS_AS(manufactured_source("manufactured-9", 0.0, g, p), InputError);
  const auto ms = ManufacturedSolution::create("manufactured-1");
  CHECK(ms.exact(0.0, g).rho[32] == doctest::Approx(1.1));
}

TEST_CASE("float formatting") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-300) == "1e-300");
  CHECK(format_double(2.0) == "2");
  double x = 0.0;
  CHECK(parse_double("0.30000000000000004", x));
  CHECK(x == 0.1 + 0.2);
  CHECK_FALSE(parse_double("1.0x", x));
  CHECK_FALSE(parse_double("", x));
}
