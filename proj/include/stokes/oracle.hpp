#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <sstream>
#include <vector>

#include "stokes/errors.hpp"
#include "stokes/model.hpp"
#include "stokes/quadrature.hpp"
#include "stokes/special_functions.hpp"

// Discrete-ordinates solver for  mu h_x + z0 h = (1/sqrt(pi)) int exp(-mu'^2)(1 + a mu mu') h dmu',
// h(0, mu > 0) = 2 U0, h(x_max, mu < 0) = 0. Uses only ModelParams and the quadrature primitives.

namespace stokes {

enum class OracleMethod { gmres, source_iteration };

struct LatticeConfig {
  double x_max = 40.0;
  int nx = 2000;
  int n_mu = 64;
  double tol = 1e-10;
  int max_iter = 10000;
  double mu_max = 5.0;
  OracleMethod method = OracleMethod::gmres;
  int gmres_restart = 60;
  bool auto_extend = true;  // double x_max (and nx) until friction stabilizes
  int max_extensions = 3;
  double extension_tol = 1e-3;

  void validate() const {
    if (!(x_max > 0.0)) throw UsageError("LatticeConfig: x_max must be > 0");
    if (nx < 200) throw UsageError("LatticeConfig: nx must be >= 200");
    if (n_mu < 24) throw UsageError("LatticeConfig: n_mu must be >= 24");
    if (!(tol > 0.0)) throw UsageError("LatticeConfig: tol must be > 0");
    if (max_iter < 1) throw UsageError("LatticeConfig: max_iter must be >= 1");
    if (!(mu_max > 0.0)) throw UsageError("LatticeConfig: mu_max must be > 0");
  }
};

/// Half-range ordinates on (0, mu_max] with weights absorbing exp(-mu^2).
struct Ordinates {
  std::vector<double> mu;
  std::vector<double> w;
};

inline Ordinates half_range_ordinates(int n_mu, double mu_max) {
  const QuadratureGrid g = composite_grid({0.0, mu_max}, n_mu);
  Ordinates o{g.nodes, g.weights};
  for (std::size_t j = 0; j < o.mu.size(); ++j) o.w[j] *= std::exp(-o.mu[j] * o.mu[j]);
  return o;
}

struct OracleSolution {
  ModelParams params;
  LatticeConfig config;  // x_max and nx actually used
  Ordinates ordinates;
  std::vector<double> x;
  std::vector<cplx> m0;  // sum_j w_j (h+ + h-) per node
  std::vector<cplx> m1;  // sum_j w_j mu_j (h+ - h-) per node
  std::vector<cplx> velocity;           // U_y(x)/U0
  std::vector<cplx> wall_incoming;      // h(0, -mu_j)
  cplx friction = 0.0;                  // normalized as fields::friction_force
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> residual_history;
  int extensions = 0;
  Warnings warnings;

  /// Linear interpolation of U_y/U0 on the spatial grid.
  cplx velocity_at(double xq) const {
    if (xq <= x.front()) return velocity.front();
    if (xq >= x.back()) return velocity.back();
    const double dx = x[1] - x[0];
    const std::size_t i = std::min(static_cast<std::size_t>(xq / dx), x.size() - 2);
    const double t = (xq - x[i]) / dx;
    return velocity[i] + t * (velocity[i + 1] - velocity[i]);
  }

  /// h(0, mu) for mu < 0 by integrating the converged source along the ray.
  cplx incoming_at_wall(double mu) const {
    if (!(mu < 0.0)) throw DomainError("incoming_at_wall: mu must be < 0");
    const double m = -mu;
    const double dx = x[1] - x[0];
    const cplx tau = params.z0 * dx / m;
    const cplx E = std::exp(-tau);
    cplx h = 0.0;
    for (std::size_t i = x.size() - 1; i > 0; --i) {
      const cplx s0 = (m0[i] - params.a * m * m1[i]) / sqrt_pi;
      const cplx s1 = (m0[i - 1] - params.a * m * m1[i - 1]) / sqrt_pi;
      h = h * E + cell_gain(tau, E, s0, s1) / params.z0;
    }
    return h;
  }

  /// (1/z0)-scaled inflow gain of a cell with linear source s0 -> s1.
  static cplx cell_gain(cplx tau, cplx E, cplx s0, cplx s1) {
    cplx one_minus_e, g;
    if (std::abs(tau) < 1e-3) {
      one_minus_e = tau * (1.0 - tau * (0.5 - tau / 6.0));
      g = tau * (0.5 - tau * (1.0 / 6.0 - tau / 24.0));
    } else {
      one_minus_e = 1.0 - E;
      g = 1.0 - one_minus_e / tau;
    }
    return s0 * one_minus_e + (s1 - s0) * g;
  }
};

namespace detail {

/// Transport sweeps and moment accumulation for a fixed lattice.
class Lattice {
 public:
  Lattice(const ModelParams& p, const LatticeConfig& cfg)
      : p_(p), cfg_(cfg), ord_(half_range_ordinates(cfg.n_mu, cfg.mu_max)), n_(cfg.nx + 1) {
    dx_ = cfg.x_max / cfg.nx;
    tau_.resize(ord_.mu.size());
    E_.resize(ord_.mu.size());
    for (std::size_t j = 0; j < ord_.mu.size(); ++j) {
      tau_[j] = p.z0 * dx_ / ord_.mu[j];
      E_[j] = std::exp(-tau_[j]);
    }
  }

  std::size_t nodes() const noexcept { return n_; }
  std::size_t unknowns() const noexcept { return 2 * n_; }
  const Ordinates& ordinates() const noexcept { return ord_; }
  double dx() const noexcept { return dx_; }

  /**
   * Moments of the transport solution with source built from moments @p m
   * (m0 then m1, or nothing when empty) and wall inflow @p wall for mu > 0.
   * When @p wall_incoming is non-null it receives h(0, -mu_j).
   */
  void sweep(std::span<const cplx> m, cplx wall, std::span<cplx> out,
             std::vector<cplx>* wall_incoming = nullptr) const {
    std::fill(out.begin(), out.end(), cplx{0.0});
    const bool has_source = !m.empty();
    if (wall_incoming) wall_incoming->assign(ord_.mu.size(), 0.0);
    auto src = [&](std::size_t i, double signed_mu) {
      return has_source ? (m[i] + p_.a * signed_mu * m[n_ + i]) / sqrt_pi : cplx{0.0};
    };
    for (std::size_t j = 0; j < ord_.mu.size(); ++j) {
      const double mu = ord_.mu[j], w = ord_.w[j];
      const cplx tau = tau_[j], E = E_[j];
      // mu > 0: march away from the wall
      cplx h = wall;
      out[0] += w * h;
      out[n_] += w * mu * h;
      for (std::size_t i = 1; i < n_; ++i) {
        h = h * E + OracleSolution::cell_gain(tau, E, src(i - 1, mu), src(i, mu)) / p_.z0;
        out[i] += w * h;
        out[n_ + i] += w * mu * h;
      }
      // mu < 0: march in from x_max
      h = 0.0;
      out[n_ - 1] += w * h;
      for (std::size_t i = n_ - 1; i > 0; --i) {
        h = h * E + OracleSolution::cell_gain(tau, E, src(i, -mu), src(i - 1, -mu)) / p_.z0;
        out[i - 1] += w * h;
        out[n_ + i - 1] -= w * mu * h;
      }
      if (wall_incoming) (*wall_incoming)[j] = h;
    }
  }

 private:
  ModelParams p_;
  LatticeConfig cfg_;
  Ordinates ord_;
  std::size_t n_;
  double dx_ = 0.0;
  std::vector<cplx> tau_;
  std::vector<cplx> E_;
};

inline double norm2(std::span<const cplx> v) {
  double s = 0.0;
  for (const cplx& c : v) s += std::norm(c);
  return std::sqrt(s);
}

/// Restarted GMRES (modified Gram-Schmidt, Givens rotations) for (I - K) m = b.
inline void gmres(const std::function<void(std::span<const cplx>, std::span<cplx>)>& apply_k,
                  std::span<const cplx> b, std::vector<cplx>& x, double tol, int max_iter, int restart,
                  int& iterations, std::vector<double>& history) {
  const std::size_t n = b.size();
  const double bnorm = std::max(norm2(b), 1e-300);
  x.assign(n, 0.0);
  std::vector<cplx> r(n), w(n), kx(n);
  iterations = 0;
  auto residual = [&]() {
    apply_k(x, kx);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - (x[i] - kx[i]);
    return norm2(r);
  };
  double beta = residual();
  history.push_back(beta / bnorm);
  while (beta / bnorm > tol && iterations < max_iter) {
    const int m = restart;
    std::vector<std::vector<cplx>> V(m + 1, std::vector<cplx>(n));
    std::vector<std::vector<cplx>> H(m + 1, std::vector<cplx>(m, 0.0));
    std::vector<cplx> cs(m), sn(m), g(m + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) V[0][i] = r[i] / beta;
    g[0] = beta;
    int k = 0;
    for (; k < m && iterations < max_iter; ++k) {
      ++iterations;
      apply_k(V[k], w);
      for (std::size_t i = 0; i < n; ++i) w[i] = V[k][i] - w[i];
      for (int j = 0; j <= k; ++j) {
        cplx h = 0.0;
        for (std::size_t i = 0; i < n; ++i) h += std::conj(V[j][i]) * w[i];
        H[j][k] = h;
        for (std::size_t i = 0; i < n; ++i) w[i] -= h * V[j][i];
      }
      const double hn = norm2(w);
      H[k + 1][k] = hn;
      if (hn > 0.0)
        for (std::size_t i = 0; i < n; ++i) V[k + 1][i] = w[i] / hn;
      for (int j = 0; j < k; ++j) {
        const cplx t = std::conj(cs[j]) * H[j][k] + std::conj(sn[j]) * H[j + 1][k];
        H[j + 1][k] = -sn[j] * H[j][k] + cs[j] * H[j + 1][k];
        H[j][k] = t;
      }
      const double den = std::hypot(std::abs(H[k][k]), std::abs(H[k + 1][k]));
      cs[k] = H[k][k] / den;
      sn[k] = H[k + 1][k] / den;
      H[k][k] = den;
      H[k + 1][k] = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = std::conj(cs[k]) * g[k];
      history.push_back(std::abs(g[k + 1]) / bnorm);
      if (std::abs(g[k + 1]) / bnorm <= tol || hn == 0.0) {
        ++k;
        break;
      }
    }
    std::vector<cplx> y(k);
    for (int i = k - 1; i >= 0; --i) {
      cplx s = g[i];
      for (int j = i + 1; j < k; ++j) s -= H[i][j] * y[j];
      y[i] = s / H[i][i];
    }
    for (int j = 0; j < k; ++j)
      for (std::size_t i = 0; i < n; ++i) x[i] += y[j] * V[j][i];
    beta = residual();
    history.back() = beta / bnorm;
  }
}

inline OracleSolution solve_fixed(const ModelParams& p, const LatticeConfig& cfg) {
  Lattice lat(p, cfg);
  const std::size_t N = lat.unknowns();
  std::vector<cplx> b(N), m(N), next(N);
  lat.sweep({}, 2.0 * p.u0, b);

  OracleSolution s;
  s.params = p;
  s.config = cfg;
  s.ordinates = lat.ordinates();
  auto apply_k = [&](std::span<const cplx> in, std::span<cplx> out) { lat.sweep(in, 0.0, out); };

  if (cfg.method == OracleMethod::gmres) {
    gmres(apply_k, b, m, cfg.tol, cfg.max_iter, cfg.gmres_restart, s.iterations, s.residual_history);
    s.residual = s.residual_history.back();
  } else {
    m = b;
    const double bn = std::max(norm2(b), 1e-300);
    for (s.iterations = 1; s.iterations <= cfg.max_iter; ++s.iterations) {
      lat.sweep(m, 2.0 * p.u0, next);
      double diff = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        diff = std::max(diff, std::abs(next[i] - m[i]));
        scale = std::max(scale, std::abs(next[i]));
      }
      m.swap(next);
      s.residual = diff / std::max(scale, bn * 1e-300);
      s.residual_history.push_back(s.residual);
      if (s.residual < cfg.tol) break;
    }
  }
  if (!(s.residual <= cfg.tol)) {
    std::ostringstream os;
    os << "solve_halfspace: no convergence in " << cfg.max_iter << " iterations (residual " << s.residual << ")";
    throw ConvergenceError(os.str(), s.residual);
  }

  // final sweep with the converged source gives the wall distribution and friction
  std::vector<cplx> moments(N);
  lat.sweep(m, 2.0 * p.u0, moments, &s.wall_incoming);
  const std::size_t n = lat.nodes();
  s.x.resize(n);
  s.m0.assign(moments.begin(), moments.begin() + n);
  s.m1.assign(moments.begin() + n, moments.end());
  s.velocity.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.x[i] = static_cast<double>(i) * lat.dx();
    s.velocity[i] = s.m0[i] / (2.0 * sqrt_pi * p.u0);
  }
  s.friction = -s.m1[0] / (2.0 * sqrt_pi * p.u0);
  return s;
}

}  // namespace detail

/**
 * @brief Discrete-ordinates solution of the half-space problem.
 *
 * With cfg.auto_extend the domain is doubled (keeping the cell size) until
 * the friction amplitude changes by less than cfg.extension_tol; if it never
 * settles the result carries Warning::truncation.
 */
inline OracleSolution solve_halfspace(const ModelParams& p, const LatticeConfig& cfg = {}) {
  cfg.validate();
  OracleSolution cur = detail::solve_fixed(p, cfg);
  if (!cfg.auto_extend) return cur;
  LatticeConfig c = cfg;
  for (int e = 0; e < cfg.max_extensions; ++e) {
    c.x_max *= 2.0;
    c.nx *= 2;
    OracleSolution next = detail::solve_fixed(p, c);
    next.extensions = e + 1;
    const double change = std::abs(next.friction - cur.friction) / std::abs(next.friction);
    cur = std::move(next);
    if (change < cfg.extension_tol) return cur;
  }
  cur.warnings.push_back(Warning::truncation);
  return cur;
}

// ---------------------------------------------------------------------------
// Analytic-vs-oracle comparison
// ---------------------------------------------------------------------------

struct ComparisonReport {
  std::vector<double> x;
  std::vector<double> velocity_error;  // |U_a - U_o| / max |U_o|
  double velocity_linf = 0.0;
  double friction_error = 0.0;
  std::vector<double> mu;
  double wall_distribution_error = 0.0;
  cplx oracle_friction = 0.0;
  cplx analytic_friction = 0.0;
  Warnings warnings;
};

/// Sampled analytic outputs handed to compare_with_analytic.
struct AnalyticSamples {
  ModelParams params;
  std::vector<double> x;
  std::vector<cplx> velocity;
  std::vector<double> mu;  // mu < 0
  std::vector<cplx> wall_distribution;
  cplx friction = 0.0;
};

inline ComparisonReport compare(const OracleSolution& o, const AnalyticSamples& a) {
  if (!same_physics(o.params, a.params)) throw UsageError("compare: oracle and analytic parameters differ");
  if (a.x.size() != a.velocity.size() || a.mu.size() != a.wall_distribution.size())
    throw UsageError("compare: sample arrays have mismatched lengths");
  ComparisonReport r;
  r.x = a.x;
  r.warnings = o.warnings;
  std::vector<cplx> uo;
  double umax = 0.0;
  for (double x : a.x) {
    uo.push_back(o.velocity_at(x));
    umax = std::max(umax, std::abs(uo.back()));
  }
  for (std::size_t i = 0; i < a.x.size(); ++i) {
    r.velocity_error.push_back(umax > 0.0 ? std::abs(a.velocity[i] - uo[i]) / umax : std::abs(a.velocity[i] - uo[i]));
    r.velocity_linf = std::max(r.velocity_linf, r.velocity_error.back());
  }
  r.oracle_friction = o.friction;
  r.analytic_friction = a.friction;
  r.friction_error = std::abs(a.friction - o.friction) / std::max(std::abs(o.friction), 1e-300);
  r.mu = a.mu;
  double hmax = 0.0, herr = 0.0;
  for (std::size_t i = 0; i < a.mu.size(); ++i) {
    const cplx ho = o.incoming_at_wall(a.mu[i]);
    hmax = std::max(hmax, std::abs(ho));
    herr = std::max(herr, std::abs(a.wall_distribution[i] - ho));
  }
  r.wall_distribution_error = hmax > 0.0 ? herr / hmax : herr;
  return r;
}

}  // namespace stokes
