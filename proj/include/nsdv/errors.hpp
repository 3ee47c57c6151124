#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nsdv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A constitutive law was evaluated outside its domain (rho <= 0, vacuum node).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Field length does not match the grid.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Malformed arguments: bad windows, unknown ids, non-monotone times.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Scenario or solver configuration violates an invariant.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// NaN/Inf or an unstable step.
class NumericalFailure : public Error {
 public:
  NumericalFailure(const std::string& what, double time)
      : Error(what + " (t=" + std::to_string(time) + ")"), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

/// Density reached the vacuum floor; the blow-up criterion fired.
class VacuumBlowUp : public Error {
 public:
  VacuumBlowUp(double time, std::size_t node, double rho,
               const std::string& context = "")
      : Error(context + "density reached vacuum floor at node " +
              std::to_string(node) +
              " (t=" + std::to_string(time) + ", rho=" + std::to_string(rho) +
              ")"),
        time_(time),
        node_(node),
        rho_(rho) {}
  double time() const { return time_; }
  std::size_t node() const { return node_; }
  double rho() const { return rho_; }

 private:
  double time_;
  std::size_t node_;
  double rho_;
};

/// The flow map stopped being an increasing homeomorphism.
class HomeomorphismViolation : public Error {
 public:
  using Error::Error;
};

/// A particle left the computational domain.
class DomainExit : public Error {
 public:
  using Error::Error;
};

}  // namespace nsdv
