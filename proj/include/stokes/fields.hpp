#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "stokes/errors.hpp"
#include "stokes/expansion.hpp"
#include "stokes/model.hpp"
#include "stokes/quadrature.hpp"
#include "stokes/riemann.hpp"
#include "stokes/spectral.hpp"
#include "stokes/special_functions.hpp"

namespace stokes {

/// Everything the physical outputs are assembled from.
struct Solution {
  ModelParams params;
  RiemannFactorization factorization;
  SpectrumResult spectrum;
  ExpansionCoefficients coeffs;

  int kappa() const noexcept { return spectrum.kappa; }
  const QuadratureGrid& grid() const noexcept { return factorization.grid(); }
};

inline Solution solve(const ModelParams& p, const GridSpec& spec = {}) {
  Solution s{p, RiemannFactorization::build(p, spec), {}, {}};
  s.spectrum = s.factorization.index();
  if (s.spectrum.kappa == 1) {
    const RootReport root = find_eta0_report(p, 1);
    s.spectrum.eta0 = root.eta0;
    s.spectrum.eta0_residual = root.residual;
    if (std::abs(root.eta0.imag()) < 1e-6) s.spectrum.warnings.push_back(Warning::eta0_near_cut);
  }
  s.coeffs = compute_expansion(s.factorization, s.spectrum.eta0);
  return s;
}

/// U_y(x1)/U0, the factor multiplying exp(-i omega1 t1).
inline cplx velocity_amplitude(const Solution& s, double x1) {
  if (!(x1 >= 0.0)) throw DomainError("velocity_amplitude: x1 must be >= 0");
  const ModelParams& p = s.params;
  const auto& g = s.grid();
  cplx sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    sum += g.weights[i] * std::exp(-x1 * p.z0 / g.nodes[i]) * s.coeffs.density_samples[i];
  if (s.kappa() == 1) sum += *s.coeffs.a0 * std::exp(-x1 * p.z0 / *s.coeffs.eta0);
  return p.z0 * sum / (2.0 * sqrt_pi * p.u0);
}

inline std::vector<cplx> velocity_profile(const Solution& s, std::span<const double> xs) {
  std::vector<cplx> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(velocity_amplitude(s, x));
  return out;
}

inline cplx wall_velocity(const Solution& s) { return velocity_amplitude(s, 0.0); }

/// h(0, mu) for mu < 0 (molecules arriving at the wall).
inline cplx wall_distribution(const Solution& s, double mu) {
  if (!(mu < 0.0)) throw DomainError("wall_distribution: mu must be < 0 (h(0, mu) = 2 U0 for mu > 0)");
  const ModelParams& p = s.params;
  const auto& g = s.grid();
  cplx sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double eta = g.nodes[i];
    sum += g.weights[i] * eta * (1.0 - p.b * mu * eta) * s.coeffs.density_samples[i] / (eta - mu);
  }
  if (s.kappa() == 1) {
    const cplx e0 = *s.coeffs.eta0;
    sum += *s.coeffs.a0 * e0 * (1.0 - p.b * mu * e0) / (e0 - mu);
  }
  return sum / sqrt_pi;
}

/// Normalized friction F_s exp(i omega1 t1)/(2 p U0) = i omega1 [a0 eta0 + int eta a]/(2 sqrt(pi) U0).
inline cplx friction_force(const Solution& s) {
  const ModelParams& p = s.params;
  const auto& g = s.grid();
  cplx sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) sum += g.weights[i] * g.nodes[i] * s.coeffs.density_samples[i];
  if (s.kappa() == 1) sum += *s.coeffs.a0 * *s.coeffs.eta0;
  return I * p.omega1 * sum / (2.0 * sqrt_pi * p.u0);
}

/// Dimensional amplitude 2 n k T U0 F_hat.
inline cplx friction_force_raw(const Solution& s, double n, double k, double T) {
  if (!(n > 0.0) || !(k > 0.0) || !(T > 0.0)) throw DomainError("friction_force_raw: n, k, T must be > 0");
  return 2.0 * n * k * T * s.params.u0 * friction_force(s);
}

/// Limiting profile exp(-x1 z0/eta0_asym) of the continuum regime.
inline cplx hydrodynamic_reference(double x1, const ModelParams& p) {
  if (!(x1 >= 0.0)) throw DomainError("hydrodynamic_reference: x1 must be >= 0");
  return std::exp(-x1 * p.z0 / eta0_asymptotic(p));
}

/// Full time-dependent value amplitude * exp(-i omega1 t1).
inline cplx at_time(cplx amplitude, double omega1, double t1) {
  return amplitude * std::exp(-I * omega1 * t1);
}

// ---------------------------------------------------------------------------
// Boundary-condition reconstruction
// ---------------------------------------------------------------------------

struct BoundaryResidual {
  std::vector<double> mu;
  std::vector<cplx> lhs;
  double max_relative = 0.0;
};

/**
 * Left side of the half-range boundary condition at mu > 0:
 *   a0 eta0 (1 - b mu eta0)/(sqrt(pi)(eta0 - mu))
 *   + (1/sqrt(pi)) PV int eta (1 - b mu eta) a(eta)/(eta - mu) deta
 *   + exp(mu^2) lambda_P(mu) a(mu),
 * which must equal 2 U0.
 */
inline cplx boundary_lhs(const Solution& s, double mu) {
  const ModelParams& p = s.params;
  const RiemannFactorization& f = s.factorization;
  const auto& g = s.grid();
  if (!(mu > 0.0 && mu < g.upper)) throw DomainError("boundary_lhs: mu must lie in (0, tau_max)");
  auto kernel = [&](double eta, cplx a) { return eta * (1.0 - p.b * mu * eta) * a; };
  const cplx a_mu = density(mu, f, s.coeffs);
  const cplx fp = kernel(mu, a_mu);
  const double scale = g.upper - g.lower;
  cplx pv = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double d = g.nodes[i] - mu;
    if (std::abs(d) < 1e-9 * scale) {
      const double h = 1e-5 * std::max(1.0, mu);
      const cplx df = (kernel(mu + h, density(mu + h, f, s.coeffs)) -
                       kernel(mu - h, density(mu - h, f, s.coeffs))) / (2.0 * h);
      pv += g.weights[i] * df;
    } else {
      pv += g.weights[i] * (kernel(g.nodes[i], s.coeffs.density_samples[i]) - fp) / d;
    }
  }
  pv += fp * std::log((g.upper - mu) / (mu - g.lower));
  cplx lhs = pv / sqrt_pi + std::exp(mu * mu) * dispersion(mu, p, Branch::principal) * a_mu;
  if (s.kappa() == 1) {
    const cplx e0 = *s.coeffs.eta0;
    lhs += *s.coeffs.a0 * e0 * (1.0 - p.b * mu * e0) / (sqrt_pi * (e0 - mu));
  }
  return lhs;
}

/// max |LHS - 2 U0|/(2 U0) over the given mu > 0.
inline BoundaryResidual boundary_residual(const Solution& s, std::span<const double> mus) {
  BoundaryResidual r;
  r.mu.assign(mus.begin(), mus.end());
  for (double mu : mus) {
    const cplx lhs = boundary_lhs(s, mu);
    r.lhs.push_back(lhs);
    r.max_relative = std::max(r.max_relative, std::abs(lhs - 2.0 * s.params.u0) / (2.0 * s.params.u0));
  }
  return r;
}

/// Uniform mu grid k * mu_max / n, k = 1..n.
inline std::vector<double> uniform_mu_grid(double mu_max = 4.0, int n = 200) {
  std::vector<double> mus(n);
  for (int k = 1; k <= n; ++k) mus[k - 1] = mu_max * k / n;
  return mus;
}

inline BoundaryResidual boundary_residual(const Solution& s) {
  const auto mus = uniform_mu_grid();
  return boundary_residual(s, mus);
}

// ---------------------------------------------------------------------------
// Eigenfunction moments
// ---------------------------------------------------------------------------

struct Moments {
  cplx zeroth;  // int exp(-mu^2) Phi dmu, expected z0
  cplx first;   // int exp(-mu^2) mu Phi dmu, expected -i omega1 eta
};

/**
 * Moments of Phi(eta, mu) = eta (1 - b mu eta)/(sqrt(pi)(eta - mu))
 * + exp(eta^2) lambda_P(eta) delta(eta - mu) for real eta > 0.
 */
inline Moments eigenfunction_moments(double eta, const ModelParams& p, double mu_max = 7.0,
                                     double panel = 0.05, int order = 20) {
  const QuadratureGrid g = interval_grid(-mu_max, mu_max, panel, order);
  auto phi = [&](double mu) { return std::exp(-mu * mu) * eta * (1.0 - p.b * mu * eta) / sqrt_pi; };
  auto dphi = [&](double mu) {
    return std::exp(-mu * mu) * eta * (-2.0 * mu * (1.0 - p.b * mu * eta) - p.b * eta) / sqrt_pi;
  };
  // 1/(eta - mu) = -1/(mu - eta)
  const cplx pv0 = -principal_value(phi, dphi, eta, g);
  const cplx pv1 = -principal_value([&](double mu) { return mu * phi(mu); },
                                    [&](double mu) { return phi(mu) + mu * dphi(mu); }, eta, g);
  const cplx lp = dispersion(eta, p, Branch::principal);
  return {pv0 + lp, pv1 + eta * lp};
}

/// Moments of the regular discrete-mode eigenfunction Phi(eta0, mu).
inline Moments discrete_eigenfunction_moments(cplx eta0, const ModelParams& p, double mu_max = 7.0,
                                              double panel = 0.02, int order = 20) {
  const QuadratureGrid g = interval_grid(-mu_max, mu_max, panel, order);
  Moments m{0.0, 0.0};
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double mu = g.nodes[i];
    const cplx v = g.weights[i] * std::exp(-mu * mu) * eta0 * (1.0 - p.b * mu * eta0) / (sqrt_pi * (eta0 - mu));
    m.zeroth += v;
    m.first += mu * v;
  }
  return m;
}

// ---------------------------------------------------------------------------
// Dedicated b = 0 formulas
// ---------------------------------------------------------------------------

namespace bgk {

namespace detail {

inline void require_bgk(const RiemannFactorization& f) {
  if (!f.params().is_bgk()) throw RegimeError("bgk: formulas require a = 0");
}

template <class F>
cplx integrate_sin_over_x(const RiemannFactorization& f, F&& weight) {
  const auto& g = f.grid();
  const auto zeta = f.zeta_samples();
  cplx sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    sum += g.weights[i] * weight(g.nodes[i]) * std::sin(zeta[i]) / f.X_principal_at_node(i);
  return sum / pi;
}

}  // namespace detail

/// h(0, mu)/(2 U0), mu < 0.
inline cplx wall_distribution(const RiemannFactorization& f, double mu, std::optional<cplx> eta0 = {}) {
  detail::require_bgk(f);
  if (!(mu < 0.0)) throw DomainError("bgk::wall_distribution: mu must be < 0");
  if (f.kappa() == 0) return detail::integrate_sin_over_x(f, [&](double eta) { return 1.0 / (eta - mu); });
  const cplx e0 = eta0.value();
  const cplx x0 = f.X(e0);
  return 1.0 / (x0 * (e0 - mu)) +
         detail::integrate_sin_over_x(f, [&](double eta) { return 1.0 / ((eta - e0) * (eta - mu)); });
}

/// U_y(x1)/U0.
inline cplx velocity(const RiemannFactorization& f, double x1, std::optional<cplx> eta0 = {}) {
  detail::require_bgk(f);
  const cplx z0 = f.params().z0;
  if (f.kappa() == 0)
    return z0 * detail::integrate_sin_over_x(f, [&](double eta) { return std::exp(-x1 * z0 / eta) / eta; });
  const cplx e0 = eta0.value();
  const cplx x0 = f.X(e0);
  return z0 * (std::exp(-x1 * z0 / e0) / (e0 * x0) +
               detail::integrate_sin_over_x(
                   f, [&](double eta) { return std::exp(-x1 * z0 / eta) / (eta * (eta - e0)); }));
}

/// Normalized friction amplitude.
inline cplx friction(const RiemannFactorization& f, std::optional<cplx> eta0 = {}) {
  detail::require_bgk(f);
  const double w = f.params().omega1;
  if (f.kappa() == 0) return I * w * detail::integrate_sin_over_x(f, [](double) { return 1.0; });
  const cplx e0 = eta0.value();
  return I * w * (1.0 / f.X(e0) + detail::integrate_sin_over_x(f, [&](double eta) { return 1.0 / (eta - e0); }));
}

}  // namespace bgk

// ---------------------------------------------------------------------------
// Sampled field
// ---------------------------------------------------------------------------

struct SolutionField {
  ModelParams params;
  SpectrumResult spectrum;
  ExpansionCoefficients coeffs;
  std::vector<double> x_samples;
  std::vector<cplx> velocity_amplitude;
  std::vector<double> mu_samples;       // mu < 0
  std::vector<cplx> wall_distribution;  // h(0, mu)
  cplx wall_velocity;
  cplx friction_amplitude;
};

inline SolutionField assemble_field(const Solution& s, std::span<const double> xs,
                                    std::span<const double> mus = {}) {
  SolutionField out;
  out.params = s.params;
  out.spectrum = s.spectrum;
  out.coeffs = s.coeffs;
  out.x_samples.assign(xs.begin(), xs.end());
  out.velocity_amplitude = velocity_profile(s, xs);
  out.mu_samples.assign(mus.begin(), mus.end());
  for (double mu : mus) out.wall_distribution.push_back(wall_distribution(s, mu));
  out.wall_velocity = wall_velocity(s);
  out.friction_amplitude = friction_force(s);
  return out;
}

}  // namespace stokes
