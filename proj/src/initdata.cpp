#include "nsdv/initdata.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "nsdv/effective.hpp"
#include "nsdv/errors.hpp"

namespace nsdv {

namespace {

double kernel(double y) {
  const double s = y / 2.0;
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - s * s));
}

double sign(double x) { return (x > 0.0) - (x < 0.0); }

constexpr double kFarFieldTolerance = 1e-8;
constexpr double kFarFieldBand = 0.05;

}  // namespace

std::vector<double> mollify(std::span<const double> field, int n,
                            const Grid1D& g) {
  if (n < 1) throw InputError("mollify: n must be >= 1");
  if (field.size() != g.size())
    throw ShapeError("mollify: field length does not match grid");
  const double support = 2.0 / n;
  if (support > g.half_length())
    throw InputError("mollify: kernel support exceeds the domain");
  const double dx = g.dx();
  const auto half = static_cast<long>(std::floor(support / dx));
  std::vector<double> w(2 * half + 1);
  double total = 0.0;
  for (long m = -half; m <= half; ++m) {
    const double v = n * kernel(n * static_cast<double>(m) * dx);
    w[m + half] = v;
    total += v;
  }
  if (total <= 0.0) {
    // Support narrower than one cell: the identity.
    return std::vector<double>(field.begin(), field.end());
  }
  for (auto& v : w) v /= total;
  const long size = static_cast<long>(field.size());
  std::vector<double> out(field.size());
  for (long i = 0; i < size; ++i) {
    double acc = 0.0;
    const double fi = field[i];
    for (long m = -half; m <= half; ++m) {
      const long j = std::clamp(i - m, 0L, size - 1);
      acc += w[m + half] * (field[j] - fi);
    }
    out[i] = fi + acc;
  }
  return out;
}

std::vector<double> v0_profile(const std::string& id, double scale,
                               const Grid1D& g) {
  std::vector<double> v(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.x(i);
    if (std::abs(x) >= 1.0) continue;
    if (id == "sawtooth") {
      v[i] = scale * (x - sign(x));
    } else if (id == "ramp_down") {
      // Smooth descent with a compensating rise near |x| = 1.
      v[i] = -scale * std::sin(std::numbers::pi * x);
    } else {
      throw InputError("unknown v0 profile " + id);
    }
  }
  return v;
}

InitialData build_initial(const ScenarioConfig& cfg) {
  const ModelParams p = cfg.model();
  const Grid1D g = cfg.grid();
  const std::size_t n = g.size();
  InitialData out;
  out.state = equilibrium_state(g, 0.0);
  auto& rho = out.state.rho;
  auto& u = out.state.u;
  bool derive_v = true;
  bool check_far_field = true;

  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, init::SmoothBump>) {
          for (std::size_t i = 0; i < n; ++i) {
            const double e = std::exp(-std::pow(g.x(i) / d.width, 2));
            rho[i] = 1.0 + d.amplitude * e;
            u[i] = d.velocity * e;
          }
        } else if constexpr (std::is_same_v<T, init::ShockLike>) {
          for (std::size_t i = 0; i < n; ++i) {
            const double x = g.x(i);
            u[i] = -d.jump * std::tanh(d.steepness * x) *
                   std::exp(-std::pow(x / d.envelope, 2));
          }
        } else if constexpr (std::is_same_v<T, init::Rarefaction>) {
          for (std::size_t i = 0; i < n; ++i) {
            const double x = g.x(i);
            u[i] = d.amplitude * std::tanh(x) * std::exp(-std::pow(x / d.envelope, 2));
          }
        } else if constexpr (std::is_same_v<T, init::FromV0>) {
          std::vector<double> bump(n);
          for (std::size_t i = 0; i < n; ++i)
            bump[i] = d.rho_amplitude * std::exp(-std::pow(g.x(i) / d.rho_width, 2));
          const auto rb = mollify(bump, d.mollifier_n, g);
          for (std::size_t i = 0; i < n; ++i) rho[i] = 1.0 + rb[i];
          const auto vn = mollify(v0_profile(d.profile, d.scale, g), d.mollifier_n, g);
          for (std::size_t i = 0; i < n; ++i)
            if (!(rho[i] > 0.0)) throw InputError("initial density is not positive");
          std::vector<double> ph(n);
          for (std::size_t i = 0; i < n; ++i) ph[i] = phi(rho[i], p);
          const auto dph = ddx(ph, g);
          for (std::size_t i = 0; i < n; ++i) u[i] = vn[i] - dph[i];
          out.v0 = vn;
          derive_v = false;
        } else if constexpr (std::is_same_v<T, init::Manufactured>) {
          out.state = ManufacturedSolution::create(d.id).exact(0.0, g);
          check_far_field = false;
        }
      },
      cfg.initial);

  if (cfg.noise > 0.0) {
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double width = g.half_length() / 6.0;
    for (std::size_t i = 0; i < n; ++i)
      out.state.u[i] += cfg.noise * normal(rng) * std::exp(-std::pow(g.x(i) / width, 2));
  }

  for (std::size_t i = 0; i < n; ++i)
    if (!(out.state.rho[i] > 0.0) || !std::isfinite(out.state.rho[i]))
      throw InputError("initial density is not positive at node " + std::to_string(i));

  if (check_far_field) {
    const double band = (1.0 - kFarFieldBand) * g.half_length();
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(g.x(i)) < band) continue;
      const double dev = std::abs(out.state.rho[i] - 1.0) + std::abs(out.state.u[i]);
      if (dev > kFarFieldTolerance)
        throw ConfigError("initial data violate far-field compatibility at x=" +
                          std::to_string(g.x(i)));
    }
    rho.front() = rho.back() = kFarFieldDensity;
    u.front() = u.back() = kFarFieldVelocity;
    if (!derive_v) out.v0.front() = out.v0.back() = kFarFieldVelocity;
  }

  if (derive_v) out.v0 = effective_velocity(out.state, g, p);
  double c = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < n; ++i)
    c = std::max(c, (out.v0[i + 1] - out.v0[i]) / g.dx());
  if (!std::isfinite(c)) throw ConfigError("initial Oleinik constant is not finite");
  out.oleinik_constant = c;
  return out;
}

ManufacturedSolution ManufacturedSolution::create(const std::string& id) {
  if (id == "manufactured-1") return ManufacturedSolution(0.1, 0.1);
  if (id == "manufactured-0") return ManufacturedSolution(0.0, 0.0);
  throw InputError("unknown manufactured solution " + id);
}

FluidState ManufacturedSolution::exact(double t, const Grid1D& g) const {
  const double k = std::numbers::pi / g.half_length();
  const double e = std::exp(-t);
  FluidState s{t, std::vector<double>(g.size()), std::vector<double>(g.size())};
  for (std::size_t i = 0; i < g.size(); ++i) {
    s.rho[i] = 1.0 + a_ * e * std::cos(k * g.x(i));
    s.u[i] = b_ * e * std::sin(k * g.x(i));
  }
  return s;
}

void ManufacturedSolution::source(double t, const Grid1D& g,
                                  const ModelParams& p,
                                  std::vector<double>& mass,
                                  std::vector<double>& momentum) const {
  const double k = std::numbers::pi / g.half_length();
  const double e = std::exp(-t);
  const double al = p.alpha();
  const double ga = p.gamma();
  mass.resize(g.size());
  momentum.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double c = std::cos(k * g.x(i));
    const double s = std::sin(k * g.x(i));
    const double rho = 1.0 + a_ * e * c;
    const double rho_t = -a_ * e * c;
    const double rho_x = -a_ * k * e * s;
    const double u = b_ * e * s;
    const double u_t = -b_ * e * s;
    const double u_x = b_ * k * e * c;
    const double u_xx = -b_ * k * k * e * s;
    mass[i] = rho_t + rho_x * u + rho * u_x;
    const double mom_t = rho_t * u + rho * u_t;
    const double conv_x = rho_x * u * u + 2.0 * rho * u * u_x;
    const double p_x = ga * std::pow(rho, ga - 1.0) * rho_x;
    const double visc_x =
        al * std::pow(rho, al - 1.0) * rho_x * u_x + std::pow(rho, al) * u_xx;
    momentum[i] = mom_t + conv_x + p_x - visc_x;
  }
}

BoundaryValues ManufacturedSolution::boundary(double t, const Grid1D& g,
                                              const ModelParams&) const {
  const double k = std::numbers::pi / g.half_length();
  const double e = std::exp(-t);
  const double L = g.half_length();
  return BoundaryValues{1.0 + a_ * e * std::cos(-k * L), b_ * e * std::sin(-k * L),
                        1.0 + a_ * e * std::cos(k * L), b_ * e * std::sin(k * L)};
}

ForcingFields manufactured_source(const std::string& id, double t,
                                  const Grid1D& g, const ModelParams& p) {
  ForcingFields f;
  ManufacturedSolution::create(id).source(t, g, p, f.mass, f.momentum);
  return f;
}

}  // namespace nsdv
