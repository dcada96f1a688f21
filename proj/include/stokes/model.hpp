#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

#include "stokes/errors.hpp"
#include "stokes/special_functions.hpp"

namespace stokes {

/**
 * @brief Dimensionless inputs of the oscillating-wall problem and the
 * constants derived from them.
 *
 * omega1 is the wall frequency in units of the collision frequency, a the
 * ellipsoidal-statistical parameter (a = 0 is BGK, a = -1 gives Pr = 2/3),
 * u0 the dimensionless wall velocity amplitude. Everything downstream is
 * linear in u0.
 */
struct ModelParams {
  double omega1 = 0.0;
  double a = 0.0;
  double u0 = 1.0;
  cplx z0;     // 1 - i omega1
  cplx b;      // i omega1 a / z0
  double b1 = 0.0;
  double b2 = 0.0;

  static ModelParams make(double omega1, double a, double u0 = 1.0) {
    if (!std::isfinite(omega1) || !(omega1 > 0.0))
      throw DomainError("ModelParams: omega1 must be finite and > 0 (the stationary case is not supported)");
    if (!std::isfinite(a) || a < -1.0 || a > 0.0)
      throw DomainError("ModelParams: a must lie in [-1, 0]");
    if (!std::isfinite(u0) || !(u0 > 0.0))
      throw DomainError("ModelParams: u0 must be finite and > 0");
    ModelParams p;
    p.omega1 = omega1;
    p.a = a;
    p.u0 = u0;
    p.z0 = cplx{1.0, -omega1};
    const double d = 1.0 + omega1 * omega1;
    p.b1 = -a * omega1 * omega1 / d;
    p.b2 = a * omega1 / d;
    p.b = cplx{p.b1, p.b2};
    return p;
  }

  /// Same gas and frequency, different wall amplitude.
  ModelParams with_u0(double new_u0) const { return make(omega1, a, new_u0); }

  bool is_bgk() const noexcept { return a == 0.0; }
};

inline bool same_physics(const ModelParams& x, const ModelParams& y) {
  return x.omega1 == y.omega1 && x.a == y.a && x.u0 == y.u0;
}

/// Pr = 2/(2 - a).
inline double prandtl_from_a(double a) {
  if (!std::isfinite(a) || a < -1.0 || a > 0.0)
    throw DomainError("prandtl_from_a: a must lie in [-1, 0]");
  return 2.0 / (2.0 - a);
}

/// a = -2(1 - Pr)/Pr.
inline double a_from_prandtl(double pr) {
  constexpr double eps = 1e-12;
  if (!std::isfinite(pr) || pr < 2.0 / 3.0 - eps || pr > 1.0 + eps)
    throw DomainError("a_from_prandtl: Pr must lie in [2/3, 1]");
  return std::clamp(-2.0 * (1.0 - pr) / pr, -1.0, 0.0);
}

}  // namespace stokes
