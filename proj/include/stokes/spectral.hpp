#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <sstream>
#include <vector>

#include "stokes/errors.hpp"
#include "stokes/model.hpp"
#include "stokes/quadrature.hpp"
#include "stokes/special_functions.hpp"

namespace stokes {

// ---------------------------------------------------------------------------
// Dispersion function lambda(z) = -i omega1 + (1 - b z^2) lambda0(z)
// ---------------------------------------------------------------------------

inline cplx dispersion(cplx z, const ModelParams& p) {
  return -I * p.omega1 + (1.0 - p.b * z * z) * lambda0(z);
}

/// Boundary values lambda^{+-}(mu) and the half-sum (principal) on the real axis.
inline cplx dispersion(double mu, const ModelParams& p, Branch branch) {
  return -I * p.omega1 + (1.0 - p.b * mu * mu) * lambda0(mu, branch);
}

inline cplx dispersion(cplx z, const ModelParams& p, Branch branch) {
  if (branch == Branch::off_axis) {
    if (z.imag() == 0.0) throw DomainError("dispersion: off-axis branch needs Im z != 0");
    return dispersion(z, p);
  }
  if (z.imag() != 0.0) throw DomainError("dispersion: boundary branch needs a real point");
  return dispersion(z.real(), p, branch);
}

/// lambda'(z) = -2 b z lambda0(z) + (1 - b z^2) lambda0'(z).
inline cplx dispersion_derivative(cplx z, const ModelParams& p) {
  return -2.0 * p.b * z * lambda0(z) + (1.0 - p.b * z * z) * lambda0_derivative(z);
}

inline cplx dispersion_derivative(double mu, const ModelParams& p, Branch branch) {
  return -2.0 * p.b * mu * lambda0(mu, branch) +
         (1.0 - p.b * mu * mu) * lambda0_derivative(mu, branch);
}

// ---------------------------------------------------------------------------
// Riemann coefficient G = lambda^+/lambda^-
// ---------------------------------------------------------------------------

/// G(tau) = G1 + i G2 = (g1 + i g2)/g0 assembled from l(tau), s(tau).
struct GComponents {
  double g0 = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;

  double G1() const { return g1 / g0; }
  double G2() const { return g2 / g0; }
  cplx value() const { return {G1(), G2()}; }
};

/**
 * Real-arithmetic decomposition of G. With p = (1 - b1 t^2) l, q = b2 t^2 s,
 * p1 = (1 - b1 t^2) s, q1 = b2 t^2 l:
 *   g0 = (p - q)^2 + (omega1 + p1 + q1)^2
 *   g1 = p^2 - q^2 + (omega1 + q1)^2 - p1^2
 *   g2 = 2 (p p1 + q (omega1 + q1))
 */
inline GComponents g_components(double tau, const ModelParams& p) {
  if (!(tau >= 0.0)) throw DomainError("g_components: tau must be >= 0");
  const auto [l, s] = l_s_pair(tau);
  const double w = p.omega1;
  const double t2 = tau * tau;
  const double pp = (1.0 - p.b1 * t2) * l;
  const double q = p.b2 * t2 * s;
  const double p1 = (1.0 - p.b1 * t2) * s;
  const double q1 = p.b2 * t2 * l;
  GComponents g;
  g.g0 = (pp - q) * (pp - q) + (w + p1 + q1) * (w + p1 + q1);
  g.g1 = pp * pp - q * q + (w + q1) * (w + q1) - p1 * p1;
  g.g2 = 2.0 * (pp * p1 + q * (w + q1));
  return g;
}

inline cplx coefficient_G(double tau, const ModelParams& p) {
  if (!(tau > 0.0)) throw DomainError("coefficient_G: tau must be > 0");
  const cplx lm = dispersion(tau, p, Branch::minus);
  if (std::abs(lm) < 1e-300) throw SingularityError("coefficient_G: lambda^- vanishes", tau);
  return dispersion(tau, p, Branch::plus) / lm;
}

/// Principal log G(tau), computed as log1p((lambda^+ - lambda^-)/lambda^-)
/// so the Gaussian-small jump at large tau keeps full relative accuracy.
inline cplx log_G(double tau, const ModelParams& p) {
  if (!(tau >= 0.0)) throw DomainError("log_G: tau must be >= 0");
  const cplx lm = dispersion(tau, p, Branch::minus);
  if (std::abs(lm) < 1e-300) throw SingularityError("log_G: lambda^- vanishes", tau);
  const double s = sqrt_pi * tau * std::exp(-tau * tau);
  const cplx jump = 2.0 * I * s * (1.0 - p.b * tau * tau);
  return log1p(jump / lm);
}

/// d/dtau log G = lambda^+'/lambda^+ - lambda^-'/lambda^-.
inline cplx log_G_derivative(double tau, const ModelParams& p) {
  return dispersion_derivative(tau, p, Branch::plus) / dispersion(tau, p, Branch::plus) -
         dispersion_derivative(tau, p, Branch::minus) / dispersion(tau, p, Branch::minus);
}

// ---------------------------------------------------------------------------
// Continuous argument theta(tau) = arg G(tau), theta(0) = 0
// ---------------------------------------------------------------------------

class ThetaProfile {
 public:
  ThetaProfile() = default;
  ThetaProfile(std::vector<double> tau, std::vector<double> theta)
      : tau_(std::move(tau)), theta_(std::move(theta)) {}

  std::span<const double> taus() const { return tau_; }
  std::span<const double> values() const { return theta_; }
  double at_end() const { return theta_.back(); }
  double tau_max() const { return tau_.back(); }

  /// Linear interpolation of the tabulated unwrapped argument.
  double operator()(double tau) const {
    if (tau <= tau_.front()) return theta_.front();
    if (tau >= tau_.back()) return theta_.back();
    const auto it = std::upper_bound(tau_.begin(), tau_.end(), tau);
    const std::size_t j = static_cast<std::size_t>(it - tau_.begin());
    const double t = (tau - tau_[j - 1]) / (tau_[j] - tau_[j - 1]);
    return theta_[j - 1] + t * (theta_[j] - theta_[j - 1]);
  }

  /// Lift a principal argument at tau onto the continuous branch.
  double unwrap(double tau, double principal) const {
    const double guess = (*this)(tau);
    const double k = std::round((guess - principal) / (2.0 * pi));
    return principal + 2.0 * pi * k;
  }

 private:
  std::vector<double> tau_;
  std::vector<double> theta_;
};

namespace detail {

inline double wrap_pi(double x) { return std::remainder(x, 2.0 * pi); }

inline void refine_theta(const ModelParams& p, double ta, double pa, double tb, double pb,
                         int depth, std::vector<double>& taus, std::vector<double>& phis) {
  if (std::abs(wrap_pi(pb - pa)) <= 0.5 * pi) {
    taus.push_back(tb);
    phis.push_back(pb);
    return;
  }
  if (depth >= 48)
    throw ResolutionError("theta_profile: argument step above pi/2 after maximal refinement near tau = " +
                          std::to_string(ta));
  const double tm = 0.5 * (ta + tb);
  const double pm = log_G(tm, p).imag();
  refine_theta(p, ta, pa, tm, pm, depth + 1, taus, phis);
  refine_theta(p, tm, pm, tb, pb, depth + 1, taus, phis);
}

}  // namespace detail

/// Unwrapped arg G on {0} + grid nodes + panel edges, refined until every step is below pi/2.
inline ThetaProfile theta_profile(const QuadratureGrid& grid, const ModelParams& p) {
  std::vector<double> pts{0.0};
  pts.insert(pts.end(), grid.nodes.begin(), grid.nodes.end());
  pts.insert(pts.end(), grid.breakpoints.begin(), grid.breakpoints.end());
  pts.push_back(grid.upper);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  std::vector<double> taus{pts.front()};
  std::vector<double> phis{log_G(pts.front(), p).imag()};
  for (std::size_t i = 1; i < pts.size(); ++i)
    detail::refine_theta(p, taus.back(), phis.back(), pts[i], log_G(pts[i], p).imag(), 0, taus, phis);

  std::vector<double> theta(taus.size());
  theta[0] = phis[0];
  for (std::size_t i = 1; i < taus.size(); ++i)
    theta[i] = theta[i - 1] + detail::wrap_pi(phis[i] - phis[i - 1]);
  return ThetaProfile(std::move(taus), std::move(theta));
}

// ---------------------------------------------------------------------------
// Critical frequencies
// ---------------------------------------------------------------------------

/// Omega(tau, a) = sqrt(s1/2 + sqrt((s1/2)^2 + s0)); 0 when no real root exists.
inline double capital_omega(double tau, double a) {
  if (!(tau >= 0.0)) throw DomainError("capital_omega: tau must be >= 0");
  if (a < -1.0 || a > 0.0) throw DomainError("capital_omega: a must lie in [-1, 0]");
  const auto [l, s] = l_s_pair(tau);
  const double s0 = s * s - l * l;
  const double f = 1.0 + a * tau * tau;
  const double s1 = s0 * f * f - 1.0;
  const double disc = 0.25 * s1 * s1 + s0;
  if (disc < 0.0) return 0.0;
  const double inner = 0.5 * s1 + std::sqrt(disc);
  return inner > 0.0 ? std::sqrt(inner) : 0.0;
}

/// omega1*(a) = max_tau Omega(tau, a): coarse scan then golden-section refinement.
inline double critical_frequency(double a, double tau_max = 7.0) {
  if (a < -1.0 || a > 0.0) throw DomainError("critical_frequency: a must lie in [-1, 0]");
  constexpr int n = 1400;
  const double h = tau_max / n;
  int best = 1;
  double best_val = capital_omega(h, a);
  for (int k = 2; k <= n; ++k) {
    const double v = capital_omega(k * h, a);
    if (v > best_val) {
      best_val = v;
      best = k;
    }
  }
  double lo = std::max(0.0, (best - 1) * h);
  double hi = std::min(tau_max, (best + 1) * h);
  constexpr double gr = 0.6180339887498949;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = capital_omega(x1, a), f2 = capital_omega(x2, a);
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = capital_omega(x2, a);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = capital_omega(x1, a);
    }
  }
  return std::max({best_val, f1, f2});
}

/**
 * Frequency at which the zero eta0 reaches the real axis, i.e. the real
 * solution (tau, omega1) of lambda^+(tau) = 0. For omega1 below it the
 * index of G is one; above it, zero.
 */
inline double index_transition_frequency(double a) {
  if (a < -1.0 || a > 0.0) throw DomainError("index_transition_frequency: a must lie in [-1, 0]");
  double tau = 0.92, w = 0.69;
  for (int it = 0; it < 60; ++it) {
    const cplx z0{1.0, -w};
    const cplx b = I * w * a / z0;
    const cplx l0 = lambda0(tau, Branch::plus);
    const cplx f = -I * w + (1.0 - b * tau * tau) * l0;
    const cplx f_tau = -2.0 * b * tau * l0 + (1.0 - b * tau * tau) * lambda0_derivative(tau, Branch::plus);
    const cplx f_w = -I - (I * a / (z0 * z0)) * tau * tau * l0;
    const double det = f_tau.real() * f_w.imag() - f_w.real() * f_tau.imag();
    const double dtau = (-f.real() * f_w.imag() + f_w.real() * f.imag()) / det;
    const double dw = (-f_tau.real() * f.imag() + f_tau.imag() * f.real()) / det;
    tau += dtau;
    w += dw;
    if (std::abs(dtau) + std::abs(dw) < 1e-14) return w;
  }
  throw ConvergenceError("index_transition_frequency: Newton did not converge", 0.0);
}

// ---------------------------------------------------------------------------
// Index and discrete spectrum
// ---------------------------------------------------------------------------

struct SpectrumResult {
  int kappa = 0;
  int n_zeros = 0;                 // 2 kappa
  std::optional<cplx> eta0;        // Re eta0 > 0, present iff kappa = 1
  double eta0_residual = 0.0;      // |lambda(eta0)|
  double omega1_star = 0.0;        // max_tau Omega(tau, a)
  double omega1_transition = 0.0;  // where kappa actually flips
  double winding = 0.0;            // theta(tau_max) / 2 pi
  Warnings warnings;
};

namespace detail {

inline Warnings frequency_warnings(double omega1, double star, double transition) {
  Warnings w;
  if (std::abs(omega1 - transition) < 0.01) w.push_back(Warning::near_critical);
  if (std::abs(omega1 - star) < 0.01) w.push_back(Warning::near_tabulated_critical);
  if (omega1 > std::min(star, transition) && omega1 < std::max(star, transition))
    w.push_back(Warning::tabulated_criterion_disagrees);
  return w;
}

}  // namespace detail

inline SpectrumResult index_from_theta(const ThetaProfile& theta, const ModelParams& p) {
  SpectrumResult r;
  r.winding = theta.at_end() / (2.0 * pi);
  const double k = std::round(r.winding);
  if (std::abs(r.winding - k) > 0.05) {
    std::ostringstream os;
    os << "index_kappa: winding " << r.winding << " is not close to an integer (near-critical)";
    throw AmbiguityError(os.str());
  }
  if (k != 0.0 && k != 1.0) throw AmbiguityError("index_kappa: index outside {0, 1}");
  r.kappa = static_cast<int>(k);
  r.n_zeros = 2 * r.kappa;
  r.omega1_star = critical_frequency(p.a);
  r.omega1_transition = index_transition_frequency(p.a);
  r.warnings = detail::frequency_warnings(p.omega1, r.omega1_star, r.omega1_transition);
  return r;
}

/// kappa = round(theta(tau_max)/2 pi), N = 2 kappa.
inline SpectrumResult index_kappa(const ModelParams& p, const GridSpec& spec = {}) {
  return index_from_theta(theta_profile(half_line_grid(spec), p), p);
}

/// Closed-form small-omega1 zero, root with positive real part.
inline cplx eta0_asymptotic(const ModelParams& p) {
  const double w = p.omega1, a = p.a;
  const cplx z0 = p.z0;
  cplx eta = std::sqrt(I * (1.0 - 1.5 * I * w * a / z0) / (w * (2.0 - a / z0)));
  if (eta.real() < 0.0) eta = -eta;
  return eta;
}

struct RootReport {
  cplx eta0;
  double residual = 0.0;
  int newton_steps = 0;
  bool used_fallback = false;
};

namespace detail {

inline std::optional<RootReport> newton_root(const ModelParams& p, cplx z, int max_steps = 60) {
  RootReport r;
  for (int k = 0; k < max_steps; ++k) {
    if (z.imag() == 0.0) z += cplx{0.0, 1e-12};
    const cplx f = dispersion(z, p);
    if (!std::isfinite(f.real()) || !std::isfinite(f.imag())) return std::nullopt;
    const cplx step = f / dispersion_derivative(z, p);
    z -= step;
    r.newton_steps = k + 1;
    if (std::abs(step) <= 1e-13 * std::max(1.0, std::abs(z))) break;
  }
  if (z.imag() == 0.0) return std::nullopt;
  if (z.real() < 0.0) z = -z;
  r.eta0 = z;
  r.residual = std::abs(dispersion(z, p));
  if (!(r.residual < 1e-12)) return std::nullopt;
  return r;
}

inline double segment_phase(const ModelParams& p, cplx za, cplx fa, cplx zb, cplx fb, int depth) {
  const double d = std::arg(fb / fa);
  if (std::abs(d) < pi / 8.0 || depth > 40) return d;
  const cplx zm = 0.5 * (za + zb);
  const cplx fm = dispersion(zm, p);
  return segment_phase(p, za, fa, zm, fm, depth + 1) + segment_phase(p, zm, fm, zb, fb, depth + 1);
}

}  // namespace detail

/// Number of zeros of lambda inside the rectangle [x0, x1] x [y0, y1] (off the real axis).
inline int count_zeros(const ModelParams& p, double x0, double x1, double y0, double y1) {
  if ((y0 < 0.0) != (y1 < 0.0) || y0 == 0.0 || y1 == 0.0)
    throw DomainError("count_zeros: rectangle must not touch the real axis");
  const std::array<cplx, 5> corners{cplx{x0, y0}, cplx{x1, y0}, cplx{x1, y1}, cplx{x0, y1}, cplx{x0, y0}};
  double total = 0.0;
  constexpr int pieces = 64;
  for (int e = 0; e < 4; ++e) {
    cplx za = corners[e];
    cplx fa = dispersion(za, p);
    for (int k = 1; k <= pieces; ++k) {
      const cplx zb = corners[e] + (corners[e + 1] - corners[e]) * (static_cast<double>(k) / pieces);
      const cplx fb = dispersion(zb, p);
      total += detail::segment_phase(p, za, fa, zb, fb, 0);
      za = zb;
      fa = fb;
    }
  }
  return static_cast<int>(std::lround(total / (2.0 * pi)));
}

namespace detail {

inline std::optional<RootReport> bracket_root(const ModelParams& p, double x0, double x1, double y0,
                                              double y1) {
  if (count_zeros(p, x0, x1, y0, y1) != 1) return std::nullopt;
  for (int level = 0; level < 60; ++level) {
    if (std::max(x1 - x0, std::abs(y1 - y0)) < 1e-4) break;
    // split off-centre so a zero is unlikely to sit on a cut line
    const double xm = x0 + 0.5013 * (x1 - x0);
    const double ym = y0 + 0.4987 * (y1 - y0);
    const std::array<std::array<double, 4>, 4> boxes{{{x0, xm, y0, ym}, {xm, x1, y0, ym},
                                                      {x0, xm, ym, y1}, {xm, x1, ym, y1}}};
    bool found = false;
    for (const auto& bx : boxes) {
      if (count_zeros(p, bx[0], bx[1], bx[2], bx[3]) == 1) {
        x0 = bx[0];
        x1 = bx[1];
        y0 = bx[2];
        y1 = bx[3];
        found = true;
        break;
      }
    }
    if (!found) break;
  }
  auto r = newton_root(p, cplx{0.5 * (x0 + x1), 0.5 * (y0 + y1)});
  if (r) r->used_fallback = true;
  return r;
}

}  // namespace detail

/**
 * Zero eta0 of lambda with Re eta0 > 0. Newton from the asymptotic seed,
 * falling back to argument-principle bisection of the right half-plane.
 */
inline RootReport find_eta0_report(const ModelParams& p, int kappa) {
  if (kappa != 1) throw NoDiscreteSpectrum("find_eta0: index is zero, lambda has no zeros");
  const cplx seed = eta0_asymptotic(p);
  if (auto r = detail::newton_root(p, seed)) return *r;

  const double box = std::max(8.0, 3.0 * std::abs(seed));
  if (auto r = detail::bracket_root(p, 0.0, box, 1e-10, box)) return *r;
  if (auto r = detail::bracket_root(p, 0.0, box, -box, -1e-10)) return *r;
  std::ostringstream os;
  os << "find_eta0: Newton and argument-principle search failed (omega1 = " << p.omega1
     << ", a = " << p.a << ", seed = " << seed << ")";
  throw ConvergenceError(os.str(), std::abs(dispersion(seed, p)));
}

inline RootReport find_eta0_report(const ModelParams& p) {
  return find_eta0_report(p, index_kappa(p).kappa);
}

inline cplx find_eta0(const ModelParams& p) { return find_eta0_report(p).eta0; }

/// Index, critical frequencies, and eta0 when it exists.
inline SpectrumResult analyze_spectrum(const ModelParams& p, const GridSpec& spec = {}) {
  SpectrumResult r = index_kappa(p, spec);
  if (r.kappa == 1) {
    const RootReport root = find_eta0_report(p, 1);
    r.eta0 = root.eta0;
    r.eta0_residual = root.residual;
    if (std::abs(root.eta0.imag()) < 1e-6) r.warnings.push_back(Warning::eta0_near_cut);
  }
  return r;
}

}  // namespace stokes
