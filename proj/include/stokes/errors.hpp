#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stokes {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative method failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_residual)
      : Error(what), last_residual_(last_residual) {}

  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

/// Operation called for the wrong spectral regime (kappa mismatch).
class RegimeError : public Error {
 public:
  using Error::Error;
};

class NoDiscreteSpectrum : public RegimeError {
 public:
  using RegimeError::RegimeError;
};

/// The winding of G(tau) does not round cleanly to an integer index.
class AmbiguityError : public Error {
 public:
  using Error::Error;
};

/// Adaptive refinement hit its depth limit.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// A denominator vanished (e.g. lambda^- at a real point).
class SingularityError : public Error {
 public:
  SingularityError(const std::string& what, double where)
      : Error(what), where_(where) {}

  double where() const noexcept { return where_; }

 private:
  double where_;
};

/// Inconsistent inputs handed to a comparison or command.
class UsageError : public Error {
 public:
  using Error::Error;
};

enum class Warning {
  near_critical,            // within 0.01 of the index transition frequency
  near_tabulated_critical,  // within 0.01 of max_tau Omega(tau, a)
  tabulated_criterion_disagrees,  // omega1 between the two frequencies
  eta0_near_cut,            // |Im eta0| < 1e-6
  truncation,               // oracle friction not stable under x_max doubling
};

inline std::string_view to_string(Warning w) {
  switch (w) {
    case Warning::near_critical: return "near_critical";
    case Warning::near_tabulated_critical: return "near_tabulated_critical";
    case Warning::tabulated_criterion_disagrees: return "tabulated_criterion_disagrees";
    case Warning::eta0_near_cut: return "eta0_near_cut";
    case Warning::truncation: return "truncation";
  }
  return "unknown";
}

using Warnings = std::vector<Warning>;

}  // namespace stokes
