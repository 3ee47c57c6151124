#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "nsdv/model.hpp"
#include "nsdv/solver.hpp"

namespace nsdv {

namespace init {

struct Equilibrium {
  bool operator==(const Equilibrium&) const = default;
};

/// rho0 = 1 + amplitude exp(-(x/width)^2), u0 = velocity exp(-(x/width)^2).
struct SmoothBump {
  double amplitude = 0.1;
  double width = 1.0;
  double velocity = 0.0;
  bool operator==(const SmoothBump&) const = default;
};

/// rho0 = 1, u0 = -jump tanh(steepness x) exp(-(x/envelope)^2).
struct ShockLike {
  double jump = 0.5;
  double steepness = 2.0;
  double envelope = 2.0;
  bool operator==(const ShockLike&) const = default;
};

/// rho0 = 1, u0 = amplitude tanh(x) exp(-(x/envelope)^2).
struct Rarefaction {
  double amplitude = 0.5;
  double envelope = 2.0;
  bool operator==(const Rarefaction&) const = default;
};

/// Rough v0 profile and density bump, both mollified with j_n; the velocity
/// follows from u0 = v0 - d_x phi(rho0).
struct FromV0 {
  std::string profile = "sawtooth";
  int mollifier_n = 4;
  double scale = 1.0;
  double rho_amplitude = 0.0;
  double rho_width = 1.0;
  bool operator==(const FromV0&) const = default;
};

struct Manufactured {
  std::string id = "manufactured-1";
  bool operator==(const Manufactured&) const = default;
};

}  // namespace init

using InitialDataSpec =
    std::variant<init::Equilibrium, init::SmoothBump, init::ShockLike,
                 init::Rarefaction, init::FromV0, init::Manufactured>;

const char* initial_kind_name(const InitialDataSpec& spec);

struct ScenarioConfig {
  double alpha = 0.75;
  double gamma = 2.0;
  double half_length = 10.0;
  std::size_t n_cells = 1024;
  SolverConfig solver;
  InitialDataSpec initial = init::Equilibrium{};
  std::uint64_t seed = 0;
  /// Amplitude of a seeded, compactly enveloped velocity perturbation.
  double noise = 0.0;

  ModelParams model() const;
  Grid1D grid() const;

  bool operator==(const ScenarioConfig& o) const;
};

/// Parses the bracketed key = value format. Throws ConfigError.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);
/// Canonical text; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ScenarioConfig& c);
/// FNV-1a 64 of the canonical text, as 16 hex digits.
std::string config_hash(const ScenarioConfig& c);

/// Checks model, grid, solver and initial-data invariants, including the
/// far-field compatibility of the built initial state. Throws ConfigError.
void validate_config(const ScenarioConfig& c);

}  // namespace nsdv
