#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "stokes/errors.hpp"
#include "stokes/model.hpp"
#include "stokes/quadrature.hpp"
#include "stokes/spectral.hpp"
#include "stokes/special_functions.hpp"

namespace stokes {

/**
 * @brief Solution of the scalar Riemann problem X^+ = G X^- on [0, infinity).
 *
 * zeta(tau) = theta(tau)/2 - pi kappa - (i/2) ln|G(tau)| is sampled on a
 * composite Gauss-Legendre grid over (0, tau_max]; beyond tau_max it is
 * taken as zero. X(z) = z^{-kappa} exp V(z) with
 * V(z) = (1/pi) int_0^tau_max zeta(t)/(t - z) dt.
 */
class RiemannFactorization {
 public:
  static RiemannFactorization build(const ModelParams& p, const GridSpec& spec = {}) {
    RiemannFactorization f;
    f.params_ = p;
    f.spec_ = spec;
    f.grid_ = half_line_grid(spec);
    f.theta_ = theta_profile(f.grid_, p);
    f.index_ = index_from_theta(f.theta_, p);
    f.kappa_ = f.index_.kappa;

    const std::size_t n = f.grid_.size();
    f.zeta_.resize(n);
    f.dzeta_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      f.zeta_[i] = f.zeta(f.grid_.nodes[i]);
      f.dzeta_[i] = f.zeta_derivative(f.grid_.nodes[i]);
    }
    f.vp_.resize(n);
    for (std::size_t i = 0; i < n; ++i) f.vp_[i] = f.principal_at_node(i);
    return f;
  }

  const ModelParams& params() const noexcept { return params_; }
  const GridSpec& grid_spec() const noexcept { return spec_; }
  const QuadratureGrid& grid() const noexcept { return grid_; }
  const ThetaProfile& theta() const noexcept { return theta_; }
  /// Index part of the spectrum (kappa, winding, critical frequencies, warnings).
  const SpectrumResult& index() const noexcept { return index_; }
  int kappa() const noexcept { return kappa_; }
  double tau_max() const noexcept { return grid_.upper; }

  std::span<const cplx> zeta_samples() const noexcept { return zeta_; }
  std::span<const cplx> zeta_derivative_samples() const noexcept { return dzeta_; }
  /// V_P at the grid nodes.
  std::span<const cplx> v_principal_samples() const noexcept { return vp_; }

  /// zeta at an arbitrary tau >= 0; zero beyond tau_max.
  cplx zeta(double tau) const {
    if (!(tau >= 0.0)) throw DomainError("zeta: tau must be >= 0");
    if (tau >= grid_.upper) return 0.0;
    if (tau == 0.0) return -pi * kappa_;
    const cplx lg = log_G(tau, params_);
    const double th = theta_.unwrap(tau, lg.imag());
    return {0.5 * th - pi * kappa_, -0.5 * lg.real()};
  }

  /// zeta'(tau) = (log G)'/(2i).
  cplx zeta_derivative(double tau) const {
    if (!(tau > 0.0)) throw DomainError("zeta_derivative: tau must be > 0");
    if (tau >= grid_.upper) return 0.0;
    return log_G_derivative(tau, params_) / (2.0 * I);
  }

  /// Cauchy integral off the cut, with zeta and zeta' subtracted at the nearest cut point.
  cplx V(cplx z) const {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("V: non-finite argument");
    const double T = grid_.upper;
    if (z.imag() == 0.0 && z.real() >= 0.0 && z.real() <= T)
      throw DomainError("V: point on the cut, use V_principal");
    const double x = std::clamp(z.real(), 0.0, T);
    const cplx zx = zeta(x);
    const cplx dzx = x > 0.0 && x < T ? zeta_derivative(x) : cplx{0.0};
    auto remainder = [&](double t, cplx zt) { return (zt - zx - dzx * (t - x)) / (t - z); };
    // panels [p_lo, p_hi) are re-integrated on a mesh graded towards x when z is close to the cut
    const auto [p_lo, p_hi] = near_panels(z);
    const std::size_t per_panel = grid_.size() / (grid_.breakpoints.size() - 1);
    cplx sum = 0.0;
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      const std::size_t panel = i / per_panel;
      if (panel >= p_lo && panel < p_hi) continue;
      sum += grid_.weights[i] * remainder(grid_.nodes[i], zeta_[i]);
    }
    if (p_lo < p_hi)
      sum += graded_integral(grid_.breakpoints[p_lo], grid_.breakpoints[p_hi], x, std::abs(z.imag()),
                             [&](double t) { return remainder(t, zeta(t)); });
    const cplx L = std::log(T - z) - std::log(-z);
    return (sum + zx * L + dzx * (T + (z - x) * L)) / pi;
  }

  /// Principal-value Cauchy integral at mu in (0, tau_max).
  cplx V_principal(double mu) const {
    if (!(mu > 0.0 && mu < grid_.upper)) throw DomainError("V_principal: mu must lie in (0, tau_max)");
    return principal_value([this](double t) { return zeta(t); },
                           [this](double t) { return zeta_derivative(t); }, mu, grid_) /
           pi;
  }

  cplx X(cplx z) const {
    if (z == cplx{0.0}) throw DomainError("X: z = 0");
    if (z.imag() == 0.0 && z.real() > 0.0) throw DomainError("X: point on the cut, use X_plus/X_minus/X_principal");
    return cut_power(z) * std::exp(V(z));
  }

  /// X(mu) := mu^{-kappa} exp V_P(mu).
  cplx X_principal(double mu) const { return cut_power(mu) * std::exp(V_principal(mu)); }
  cplx X_plus(double mu) const { return cut_power(mu) * std::exp(V_principal(mu) + I * zeta(mu)); }
  cplx X_minus(double mu) const { return cut_power(mu) * std::exp(V_principal(mu) - I * zeta(mu)); }

  /// X_principal at grid node i (cached V_P).
  cplx X_principal_at_node(std::size_t i) const { return cut_power(grid_.nodes[i]) * std::exp(vp_[i]); }

 private:
  /// Panel range around Re z needing a local mesh; empty when z is far from the cut.
  std::pair<std::size_t, std::size_t> near_panels(cplx z) const {
    const auto& bp = grid_.breakpoints;
    const double x = z.real();
    if (x < bp.front() || x > bp.back()) return {0, 0};
    std::size_t k = std::upper_bound(bp.begin(), bp.end(), x) - bp.begin();
    k = std::clamp<std::size_t>(k, 1, bp.size() - 1) - 1;
    if (std::abs(z.imag()) >= 0.5 * (bp[k + 1] - bp[k])) return {0, 0};
    return {k == 0 ? 0 : k - 1, std::min(k + 2, bp.size() - 1)};
  }

  /// Gauss-Legendre on [lo, hi] with panels shrinking geometrically towards x down to width ~ y.
  template <class F>
  cplx graded_integral(double lo, double hi, double x, double y, F&& f) const {
    static const auto rule = gauss_legendre_rule(20);
    std::vector<double> edges{lo, hi};
    if (x > lo && x < hi) edges.push_back(x);
    const double h = std::max(y, 1e-14 * std::max(1.0, x));
    for (double d = h; d < hi - lo; d *= 2.0) {
      if (x - d > lo) edges.push_back(x - d);
      if (x + d < hi) edges.push_back(x + d);
    }
    std::sort(edges.begin(), edges.end());
    cplx sum = 0.0;
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
      const double half = 0.5 * (edges[e + 1] - edges[e]), mid = 0.5 * (edges[e + 1] + edges[e]);
      for (std::size_t k = 0; k < rule.first.size(); ++k) sum += half * rule.second[k] * f(mid + half * rule.first[k]);
    }
    return sum;
  }

  cplx cut_power(cplx z) const { return kappa_ == 0 ? cplx{1.0} : 1.0 / z; }

  cplx principal_at_node(std::size_t j) const {
    const double mu = grid_.nodes[j];
    const cplx fp = zeta_[j];
    cplx sum = grid_.weights[j] * dzeta_[j];
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      if (i == j) continue;
      sum += grid_.weights[i] * (zeta_[i] - fp) / (grid_.nodes[i] - mu);
    }
    return (sum + fp * std::log((grid_.upper - mu) / (mu - grid_.lower))) / pi;
  }

  ModelParams params_;
  GridSpec spec_;
  QuadratureGrid grid_;
  ThetaProfile theta_;
  SpectrumResult index_;
  int kappa_ = 0;
  std::vector<cplx> zeta_;
  std::vector<cplx> dzeta_;
  std::vector<cplx> vp_;
};

inline RiemannFactorization build_factorization(const ModelParams& p, const GridSpec& spec = {}) {
  return RiemannFactorization::build(p, spec);
}

}  // namespace stokes
