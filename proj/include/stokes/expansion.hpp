#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "stokes/errors.hpp"
#include "stokes/riemann.hpp"
#include "stokes/special_functions.hpp"

namespace stokes {

namespace detail {

inline void require_kappa(const RiemannFactorization& f, int kappa, const char* who) {
  if (f.kappa() != kappa)
    throw RegimeError(std::string(who) + ": requires kappa = " + std::to_string(kappa) +
                      ", factorization has kappa = " + std::to_string(f.kappa()));
}

}  // namespace detail

/// J0 = (1/pi) int tau sin zeta / ((1 - b tau^2) X(tau)) dtau, kappa = 0.
inline cplx J0(const RiemannFactorization& f) {
  detail::require_kappa(f, 0, "J0");
  const auto& g = f.grid();
  const cplx b = f.params().b;
  const auto zeta = f.zeta_samples();
  cplx sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double t = g.nodes[i];
    sum += g.weights[i] * t * std::sin(zeta[i]) / ((1.0 - b * t * t) * f.X_principal_at_node(i));
  }
  return sum / pi;
}

/// J1 = (1/pi) int tau sin zeta / ((1 - b tau^2)(tau - eta0) X(tau)) dtau, kappa = 1.
inline cplx J1(const RiemannFactorization& f, cplx eta0) {
  detail::require_kappa(f, 1, "J1");
  if (eta0.imag() == 0.0) throw SingularityError("J1: eta0 on the real axis", eta0.real());
  const auto& g = f.grid();
  const cplx b = f.params().b;
  const auto zeta = f.zeta_samples();
  cplx sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double t = g.nodes[i];
    sum += g.weights[i] * t * std::sin(zeta[i]) /
           ((1.0 - b * t * t) * (t - eta0) * f.X_principal_at_node(i));
  }
  return sum / pi;
}

/// a(eta) for kappa = 0, given X(eta) and zeta(eta).
inline cplx density_k0(double eta, cplx zeta, cplx x, const ModelParams& p, cplx j0) {
  return 2.0 * p.u0 * std::sin(zeta) /
         (sqrt_pi * (1.0 + p.b * j0) * eta * (1.0 - p.b * eta * eta) * x);
}

/// a(eta) for kappa = 1.
inline cplx density_k1(double eta, cplx zeta, cplx x, const ModelParams& p, cplx eta0, cplx c1) {
  return -c1 * std::sin(zeta) / (sqrt_pi * eta * (1.0 - p.b * eta * eta) * (eta - eta0) * x);
}

inline cplx continuous_density_k0(double eta, const RiemannFactorization& f, cplx j0) {
  detail::require_kappa(f, 0, "continuous_density_k0");
  if (std::abs(1.0 + f.params().b * j0) < 1e-12)
    throw SingularityError("continuous_density_k0: 1 + b J0 vanishes", eta);
  return density_k0(eta, f.zeta(eta), f.X_principal(eta), f.params(), j0);
}

inline cplx continuous_density_k1(double eta, const RiemannFactorization& f, cplx eta0, cplx c1) {
  detail::require_kappa(f, 1, "continuous_density_k1");
  return density_k1(eta, f.zeta(eta), f.X_principal(eta), f.params(), eta0, c1);
}

struct DiscreteCoefficient {
  cplx a0;
  cplx C1;
  cplx y0;    // eta0 (1 - b eta0^2) X(eta0) (1 + b J1)
  cplx X_eta0;
  cplx denominator;
};

/**
 * a0 = 2 U0 sqrt(pi) / D and C1 = -2 U0 eta0 (1 - b eta0^2) X(eta0) / D with
 * D = b eta0^2 + eta0 (1 - b eta0^2) X(eta0) (1 + b J1).
 */
inline DiscreteCoefficient discrete_coefficient(const RiemannFactorization& f, cplx eta0, cplx j1) {
  detail::require_kappa(f, 1, "discrete_coefficient");
  const ModelParams& p = f.params();
  DiscreteCoefficient d;
  d.X_eta0 = f.X(eta0);
  const cplx core = eta0 * (1.0 - p.b * eta0 * eta0) * d.X_eta0;
  d.y0 = core * (1.0 + p.b * j1);
  d.denominator = p.b * eta0 * eta0 + d.y0;
  if (std::abs(d.denominator) < 1e-14) {
    std::ostringstream os;
    os << "discrete_coefficient: vanishing denominator (eta0 = " << eta0 << ", J1 = " << j1 << ")";
    throw SingularityError(os.str(), eta0.real());
  }
  d.a0 = 2.0 * p.u0 * sqrt_pi / d.denominator;
  d.C1 = -2.0 * p.u0 * core / d.denominator;
  return d;
}

/// Coefficients of the eigenfunction expansion, with a(eta) sampled on the factorization grid.
struct ExpansionCoefficients {
  int kappa = 0;
  std::optional<cplx> eta0;
  std::optional<cplx> a0;
  std::optional<cplx> C1;
  std::optional<cplx> C0;
  std::optional<cplx> y0;
  std::optional<cplx> X_eta0;
  cplx J = 0.0;  // J0 when kappa = 0, J1 when kappa = 1
  cplx A = 0.0;
  std::vector<cplx> density_samples;  // a(eta) at grid nodes
};

inline ExpansionCoefficients compute_expansion(const RiemannFactorization& f,
                                               std::optional<cplx> eta0 = std::nullopt) {
  const ModelParams& p = f.params();
  const auto& g = f.grid();
  const auto zeta = f.zeta_samples();
  ExpansionCoefficients c;
  c.kappa = f.kappa();
  c.density_samples.resize(g.size());
  if (c.kappa == 0) {
    c.J = J0(f);
    if (std::abs(1.0 + p.b * c.J) < 1e-12) throw SingularityError("compute_expansion: 1 + b J0 vanishes", 0.0);
    c.A = 2.0 * p.u0 * p.b * c.J / (1.0 + p.b * c.J);
    c.C0 = c.A - 2.0 * p.u0;
    for (std::size_t i = 0; i < g.size(); ++i)
      c.density_samples[i] = density_k0(g.nodes[i], zeta[i], f.X_principal_at_node(i), p, c.J);
    return c;
  }
  const cplx e0 = eta0 ? *eta0 : find_eta0_report(p, 1).eta0;
  c.eta0 = e0;
  c.J = J1(f, e0);
  const DiscreteCoefficient d = discrete_coefficient(f, e0, c.J);
  c.a0 = d.a0;
  c.C1 = d.C1;
  c.y0 = d.y0;
  c.X_eta0 = d.X_eta0;
  c.A = -p.b * d.C1 * c.J;
  for (std::size_t i = 0; i < g.size(); ++i)
    c.density_samples[i] = density_k1(g.nodes[i], zeta[i], f.X_principal_at_node(i), p, e0, d.C1);
  return c;
}

/// a(eta) at an arbitrary point of (0, tau_max).
inline cplx density(double eta, const RiemannFactorization& f, const ExpansionCoefficients& c) {
  if (c.kappa == 0) return continuous_density_k0(eta, f, c.J);
  return continuous_density_k1(eta, f, *c.eta0, *c.C1);
}

/// A = b (1/sqrt(pi)) int eta^2 a(eta) deta, recomputed from the density samples.
inline cplx A_from_density(const RiemannFactorization& f, const ExpansionCoefficients& c) {
  const auto& g = f.grid();
  cplx sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    sum += g.weights[i] * g.nodes[i] * g.nodes[i] * c.density_samples[i];
  return f.params().b * sum / sqrt_pi;
}

}  // namespace stokes
