#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "stokes/errors.hpp"

namespace stokes {

using cplx = std::complex<double>;

inline constexpr double sqrt_pi = 1.0 / std::numbers::inv_sqrtpi;
inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

/// Side of the real axis on which a Cauchy-type function is evaluated.
enum class Branch { off_axis, plus, minus, principal };

/**
 * @brief Faddeeva function w(z) = exp(-z^2) erfc(-iz).
 *
 * Poppe & Wijers rational/continued-fraction scheme (ACM TOMS 680),
 * roughly 14 significant digits over the whole plane. Lower half-plane
 * values come from the reflection w(z) = 2 exp(-z^2) - w(-z).
 */
inline cplx faddeeva(cplx z) {
  constexpr double factor = 1.12837916709551257388;  // 2/sqrt(pi)
  const double xi = z.real();
  const double yi = z.imag();
  if (!std::isfinite(xi) || !std::isfinite(yi))
    throw DomainError("faddeeva: non-finite argument");

  const double xabs = std::abs(xi);
  const double yabs = std::abs(yi);
  const double x = xabs / 6.3;
  const double y = yabs / 4.4;

  double qrho = x * x + y * y;
  double xquad = xabs * xabs - yabs * yabs;
  const double yquad = 2.0 * xabs * yabs;
  const bool small = qrho < 0.085264;

  double u = 0.0, v = 0.0, u2 = 0.0, v2 = 0.0;
  if (small) {
    // power series of erf around the origin
    qrho = (1.0 - 0.85 * y) * std::sqrt(qrho);
    const int n = static_cast<int>(std::lround(6.0 + 72.0 * qrho));
    int j = 2 * n + 1;
    double xsum = 1.0 / j;
    double ysum = 0.0;
    for (int i = n; i >= 1; --i) {
      j -= 2;
      const double xaux = (xsum * xquad - ysum * yquad) / i;
      ysum = (xsum * yquad + ysum * xquad) / i;
      xsum = xaux + 1.0 / j;
    }
    const double u1 = -factor * (xsum * yabs + ysum * xabs) + 1.0;
    const double v1 = factor * (xsum * xabs - ysum * yabs);
    const double daux = std::exp(-xquad);
    u2 = daux * std::cos(yquad);
    v2 = -daux * std::sin(yquad);
    u = u1 * u2 - v1 * v2;
    v = u1 * v2 + v1 * u2;
  } else {
    // Laplace continued fraction, truncated Taylor correction inside |z|~1
    double h = 0.0, h2 = 0.0, qlambda = 0.0;
    int kapn = 0, nu = 0;
    if (qrho > 1.0) {
      qrho = std::sqrt(qrho);
      nu = static_cast<int>(3.0 + 1442.0 / (26.0 * qrho + 77.0));
    } else {
      qrho = (1.0 - y) * std::sqrt(1.0 - qrho);
      h = 1.88 * qrho;
      h2 = 2.0 * h;
      kapn = static_cast<int>(std::lround(7.0 + 34.0 * qrho));
      nu = static_cast<int>(std::lround(16.0 + 26.0 * qrho));
    }
    const bool taylor = h > 0.0;
    if (taylor) qlambda = std::pow(h2, kapn);

    double rx = 0.0, ry = 0.0, sx = 0.0, sy = 0.0;
    for (int n = nu; n >= 0; --n) {
      const double np1 = n + 1.0;
      double tx = yabs + h + np1 * rx;
      double ty = xabs - np1 * ry;
      const double c = 0.5 / (tx * tx + ty * ty);
      rx = c * tx;
      ry = c * ty;
      if (taylor && n <= kapn) {
        tx = qlambda + sx;
        sx = rx * tx - ry * sy;
        sy = ry * tx + rx * sy;
        qlambda /= h2;
      }
    }
    if (taylor) {
      u = factor * sx;
      v = factor * sy;
    } else {
      u = factor * rx;
      v = factor * ry;
    }
    if (yabs == 0.0) u = std::exp(-xabs * xabs);
  }

  if (yi < 0.0) {
    if (small) {
      u2 *= 2.0;
      v2 *= 2.0;
    } else {
      xquad = -xquad;
      const double w1 = 2.0 * std::exp(xquad);
      u2 = w1 * std::cos(yquad);
      v2 = -w1 * std::sin(yquad);
    }
    u = u2 - u;
    v = v2 - v;
    if (xi > 0.0) v = -v;
  } else if (xi < 0.0) {
    v = -v;
  }
  return {u, v};
}

/// Dawson integral F(x) = exp(-x^2) * int_0^x exp(t^2) dt.
inline double dawson(double x) {
  return 0.5 * sqrt_pi * faddeeva(cplx{x, 0.0}).imag();
}

/// Plasma dispersion function Z(z) = pi^{-1/2} int exp(-t^2)/(t - z) dt,
/// z off the real axis.
inline cplx plasma_z(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw DomainError("plasma_z: non-finite argument");
  if (z.imag() > 0.0) return I * sqrt_pi * faddeeva(z);
  if (z.imag() < 0.0) return std::conj(I * sqrt_pi * faddeeva(std::conj(z)));
  throw DomainError("plasma_z: argument on the real axis, select a branch");
}

struct LSPair {
  double l;
  double s;
};

/// Real and imaginary building blocks of the boundary values
/// lambda0^{+-}(tau) = l(tau) +- i s(tau).
inline LSPair l_s_pair(double tau) {
  if (!std::isfinite(tau)) throw DomainError("l_s_pair: non-finite tau");
  return {1.0 - 2.0 * tau * dawson(tau), sqrt_pi * tau * std::exp(-tau * tau)};
}

/// lambda0(z) = pi^{-1/2} int exp(-t^2) t/(t - z) dt = 1 + z Z(z).
inline cplx lambda0(cplx z) { return 1.0 + z * plasma_z(z); }

/// Boundary values on the real axis; Branch::off_axis is rejected here.
inline cplx lambda0(double mu, Branch branch) {
  const auto [l, s] = l_s_pair(mu);
  switch (branch) {
    case Branch::plus: return {l, s};
    case Branch::minus: return {l, -s};
    case Branch::principal: return {l, 0.0};
    case Branch::off_axis: break;
  }
  throw DomainError("lambda0: real argument needs plus/minus/principal branch");
}

/// Dispatching form: off-axis z, or a real z with an explicit branch.
inline cplx lambda0(cplx z, Branch branch) {
  if (branch == Branch::off_axis) return lambda0(z);
  if (z.imag() != 0.0) throw DomainError("lambda0: branch selector needs a real point");
  return lambda0(z.real(), branch);
}

/// lambda0'(z) = Z(z) - 2 z lambda0(z), which equals (lambda0 - 1)/z - 2 z lambda0.
inline cplx lambda0_derivative(cplx z) {
  const cplx zz = plasma_z(z);
  return zz - 2.0 * z * (1.0 + z * zz);
}

/// Derivative of the boundary values lambda0^{+-} along the real axis.
inline cplx lambda0_derivative(double mu, Branch branch) {
  const double sign = branch == Branch::plus ? 1.0 : branch == Branch::minus ? -1.0 : 0.0;
  if (branch == Branch::off_axis)
    throw DomainError("lambda0_derivative: real argument needs a branch");
  const cplx zz{-2.0 * dawson(mu), sign * sqrt_pi * std::exp(-mu * mu)};
  return zz - 2.0 * mu * lambda0(mu, branch);
}

/// log(1 + w) without cancellation for small |w|.
inline cplx log1p(cplx w) {
  const double re = w.real(), im = w.imag();
  return {0.5 * std::log1p(2.0 * re + re * re + im * im), std::atan2(im, 1.0 + re)};
}

}  // namespace stokes
