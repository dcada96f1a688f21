#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include "stokes/errors.hpp"

namespace stokes {

/// Nodes and weights of a composite rule on [lower, upper].
struct QuadratureGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> breakpoints;  // panel edges, lower and upper included
  double lower = 0.0;
  double upper = 0.0;

  std::size_t size() const noexcept { return nodes.size(); }
  double tau_max() const noexcept { return upper; }

  template <class F>
  auto integrate(F&& f) const {
    using R = decltype(f(0.0));
    R sum{};
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }

  template <class T>
  T integrate_samples(std::span<const T> values) const {
    T sum{};
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * values[i];
    return sum;
  }
};

/// n-point Gauss-Legendre rule on [-1, 1], ascending nodes.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre_rule(int n) {
  if (n < 1) throw DomainError("gauss_legendre_rule: n must be positive");
  std::vector<double> x(n), w(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      dp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

/// Gauss-Legendre panels between consecutive breakpoints.
inline QuadratureGrid composite_grid(std::vector<double> breakpoints, int order) {
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
  if (breakpoints.size() < 2) throw DomainError("composite_grid: need at least one panel");
  const auto [x, w] = gauss_legendre_rule(order);
  QuadratureGrid g;
  g.lower = breakpoints.front();
  g.upper = breakpoints.back();
  g.nodes.reserve((breakpoints.size() - 1) * order);
  g.weights.reserve((breakpoints.size() - 1) * order);
  for (std::size_t p = 0; p + 1 < breakpoints.size(); ++p) {
    const double half = 0.5 * (breakpoints[p + 1] - breakpoints[p]);
    const double mid = 0.5 * (breakpoints[p + 1] + breakpoints[p]);
    for (int k = 0; k < order; ++k) {
      g.nodes.push_back(mid + half * x[k]);
      g.weights.push_back(half * w[k]);
    }
  }
  g.breakpoints = std::move(breakpoints);
  return g;
}

/// Layout of the half-line grid (0, tau_max] shared by every spectral integral.
struct GridSpec {
  double tau_max = 7.0;       // exp(-49) is below round-off
  double panel_width = 0.25;
  int order = 20;             // Gauss-Legendre points per panel
  int graded_levels = 8;      // geometric panels towards tau = 0
  double grading = 0.3;

  /// Same layout with halved panels, for resolution checks.
  GridSpec refined() const {
    GridSpec r = *this;
    r.panel_width *= 0.5;
    r.graded_levels += 2;
    return r;
  }
};

inline QuadratureGrid half_line_grid(const GridSpec& spec = {}) {
  if (!(spec.tau_max > 0.0) || !(spec.panel_width > 0.0) || spec.order < 2)
    throw DomainError("half_line_grid: invalid grid specification");
  std::vector<double> bp{0.0};
  const double first = std::min(spec.panel_width, spec.tau_max);
  for (int k = spec.graded_levels; k >= 1; --k) bp.push_back(first * std::pow(spec.grading, k));
  const int n = static_cast<int>(std::ceil(spec.tau_max / spec.panel_width - 1e-9));
  for (int k = 1; k <= n; ++k) bp.push_back(std::min(k * spec.panel_width, spec.tau_max));
  return composite_grid(std::move(bp), spec.order);
}

/// Uniform panels on [lower, upper]; used for full-line moment integrals.
inline QuadratureGrid interval_grid(double lower, double upper, double panel_width, int order) {
  if (!(upper > lower)) throw DomainError("interval_grid: empty interval");
  const int n = std::max(1, static_cast<int>(std::ceil((upper - lower) / panel_width - 1e-9)));
  std::vector<double> bp;
  for (int k = 0; k <= n; ++k) bp.push_back(lower + (upper - lower) * k / n);
  return composite_grid(std::move(bp), order);
}

/**
 * @brief PV int_lower^upper f(t)/(t - pole) dt by singularity subtraction:
 *   int (f(t) - f(pole))/(t - pole) dt + f(pole) ln((upper - pole)/(pole - lower)).
 *
 * A node coinciding with the pole uses the derivative @p df(pole).
 */
template <class F, class DF>
auto principal_value(F&& f, DF&& df, double pole, const QuadratureGrid& grid) {
  if (!(pole > grid.lower && pole < grid.upper))
    throw DomainError("principal_value: pole outside the grid support");
  using R = std::decay_t<decltype(f(pole))>;
  const R fp = f(pole);
  const double scale = grid.upper - grid.lower;
  R sum{};
  bool have_derivative = false;
  R dfp{};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = grid.nodes[i] - pole;
    if (std::abs(d) < 1e-9 * scale) {
      if (!have_derivative) {
        dfp = df(pole);
        have_derivative = true;
      }
      sum += grid.weights[i] * dfp;
    } else {
      sum += grid.weights[i] * (f(grid.nodes[i]) - fp) / d;
    }
  }
  return sum + fp * std::log((grid.upper - pole) / (pole - grid.lower));
}

/// Overload for integrands without a known derivative (central difference fallback).
template <class F>
auto principal_value(F&& f, double pole, const QuadratureGrid& grid) {
  const double h = 1e-5 * std::max(1.0, std::abs(pole));
  return principal_value(
      f, [&](double t) { return (f(t + h) - f(t - h)) / (2.0 * h); }, pole, grid);
}

}  // namespace stokes
