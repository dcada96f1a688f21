#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "stokes/errors.hpp"
#include "stokes/fields.hpp"
#include "stokes/model.hpp"
#include "stokes/oracle.hpp"
#include "stokes/spectral.hpp"
#include "stokes/validation.hpp"

namespace stokes::cli {

using json = nlohmann::ordered_json;

enum class Format { json, csv };

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 2;
inline constexpr int exit_regime = 3;
inline constexpr int exit_validation = 4;

/// Tabulated critical frequencies for a = 0, -0.1, ..., -1.
inline constexpr std::array<double, 11> tabulated_critical{0.733, 0.717, 0.717, 0.691, 0.681, 0.672,
                                                           0.662, 0.654, 0.648, 0.642, 0.637};

struct RunConfig {
  std::string command;
  std::optional<double> omega1;
  std::optional<double> a;
  std::optional<double> prandtl;
  double u0 = 1.0;
  Format format = Format::json;
  std::string out;  // empty: standard output
  LatticeConfig lattice;
  GridSpec grid;
  bool validate = false;
  std::vector<double> x;  // profile abscissae
  double velocity_tol = 1e-2;
  double friction_tol = 1e-2;
};

/// Tabular payload for CSV output.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct CommandResult {
  json doc;
  Table table;
  int exit_code = exit_ok;
};

// ---------------------------------------------------------------------------
// Formatting helpers
// ---------------------------------------------------------------------------

/// Shortest round-trip decimal, independent of locale.
inline std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

inline json to_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

inline json to_json(const Warnings& w) {
  json arr = json::array();
  for (Warning x : w) arr.push_back(std::string(to_string(x)));
  return arr;
}

inline std::string join_warnings(const Warnings& w) {
  std::string s;
  for (Warning x : w) {
    if (!s.empty()) s += ';';
    s += to_string(x);
  }
  return s;
}

inline std::string render_csv(const Table& t) {
  std::string s;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) s += ',';
      s += cells[i];
    }
    s += '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return s;
}

inline std::string render(const CommandResult& r, Format f) {
  return f == Format::json ? r.doc.dump(2) + "\n" : render_csv(r.table);
}

// ---------------------------------------------------------------------------
// Parameter resolution
// ---------------------------------------------------------------------------

inline ModelParams resolve_params(const RunConfig& c) {
  if (!c.omega1) throw UsageError("--omega1 is required for '" + c.command + "'");
  if (c.a && c.prandtl) throw UsageError("give exactly one of --a and --prandtl");
  if (!c.a && !c.prandtl) throw UsageError("one of --a or --prandtl is required");
  const double a = c.a ? *c.a : a_from_prandtl(*c.prandtl);
  return ModelParams::make(*c.omega1, a, c.u0);
}

inline json provenance(const RunConfig& c, const ModelParams* p) {
  json j;
  j["command"] = c.command;
  if (p) {
    j["parameters"] = {{"omega1", p->omega1}, {"a", p->a}, {"prandtl", prandtl_from_a(p->a)}, {"u0", p->u0}};
  }
  j["grid"] = {{"tau_max", c.grid.tau_max},
               {"panel_width", c.grid.panel_width},
               {"order", c.grid.order},
               {"graded_levels", c.grid.graded_levels}};
  if (c.validate || c.command == "validate")
    j["lattice"] = {{"x_max", c.lattice.x_max}, {"nx", c.lattice.nx}, {"n_mu", c.lattice.n_mu}, {"tol", c.lattice.tol}};
  return j;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

inline CommandResult cmd_critical_table(const RunConfig& c) {
  CommandResult r;
  r.doc["provenance"] = provenance(c, nullptr);
  r.table.header = {"prandtl", "a", "omega1_star", "omega1_star_tabulated", "deviation", "omega1_transition"};
  json rows = json::array();
  double prev = std::numeric_limits<double>::infinity();
  bool monotone = true;
  for (int k = 0; k <= 10; ++k) {
    const double a = k == 0 ? 0.0 : -k / 10.0;
    const double star = critical_frequency(a);
    const double tr = index_transition_frequency(a);
    const double tab = tabulated_critical[k];
    monotone = monotone && star < prev;
    prev = star;
    rows.push_back({{"prandtl", prandtl_from_a(a)},
                    {"a", a},
                    {"omega1_star", star},
                    {"omega1_star_tabulated", tab},
                    {"deviation", star - tab},
                    {"omega1_transition", tr}});
    r.table.rows.push_back({num(prandtl_from_a(a)), num(a), num(star), num(tab), num(star - tab), num(tr)});
  }
  r.doc["rows"] = rows;
  r.doc["strictly_decreasing"] = monotone;
  return r;
}

inline CommandResult cmd_spectrum(const RunConfig& c) {
  const ModelParams p = resolve_params(c);
  const SpectrumResult s = analyze_spectrum(p, c.grid);
  CommandResult r;
  r.doc["provenance"] = provenance(c, &p);
  r.doc["kappa"] = s.kappa;
  r.doc["n_zeros"] = s.n_zeros;
  r.doc["winding"] = s.winding;
  r.doc["omega1_star"] = s.omega1_star;
  r.doc["omega1_transition"] = s.omega1_transition;
  r.doc["eta0"] = s.eta0 ? to_json(*s.eta0) : json(nullptr);
  r.doc["eta0_residual"] = s.eta0 ? json(s.eta0_residual) : json(nullptr);
  r.doc["warnings"] = to_json(s.warnings);
  r.table.header = {"omega1", "a", "kappa", "n_zeros", "omega1_star", "omega1_transition",
                    "eta0_re", "eta0_im", "eta0_residual", "warnings"};
  r.table.rows.push_back({num(p.omega1), num(p.a), std::to_string(s.kappa), std::to_string(s.n_zeros),
                          num(s.omega1_star), num(s.omega1_transition), s.eta0 ? num(s.eta0->real()) : "",
                          s.eta0 ? num(s.eta0->imag()) : "", s.eta0 ? num(s.eta0_residual) : "",
                          join_warnings(s.warnings)});
  return r;
}

inline std::vector<double> default_profile_x() { return linspace(0.0, 10.0, 101); }

inline CommandResult cmd_profile(const RunConfig& c) {
  const ModelParams p = resolve_params(c);
  const Solution s = solve(p, c.grid);
  const std::vector<double> xs = c.x.empty() ? default_profile_x() : c.x;
  for (double x : xs)
    if (!(x >= 0.0)) throw UsageError("profile abscissae must be >= 0");
  const std::vector<cplx> u = velocity_profile(s, xs);

  std::optional<OracleSolution> oracle;
  if (c.validate) oracle = solve_halfspace(p, c.lattice);

  CommandResult r;
  r.doc["provenance"] = provenance(c, &p);
  r.doc["kappa"] = s.kappa();
  Warnings warn = s.spectrum.warnings;
  r.table.header = {"x", "u_re", "u_im", "u_abs", "u_phase"};
  if (oracle) r.table.header.insert(r.table.header.end(), {"oracle_re", "oracle_im"});
  json pts = json::array();
  double umax = 0.0, err = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    json pt{{"x", xs[i]}, {"u", to_json(u[i])}, {"abs", std::abs(u[i])}, {"phase", std::arg(u[i])}};
    std::vector<std::string> row{num(xs[i]), num(u[i].real()), num(u[i].imag()), num(std::abs(u[i])),
                                 num(std::arg(u[i]))};
    if (oracle) {
      const cplx uo = oracle->velocity_at(xs[i]);
      pt["oracle"] = to_json(uo);
      row.push_back(num(uo.real()));
      row.push_back(num(uo.imag()));
      umax = std::max(umax, std::abs(uo));
      err = std::max(err, std::abs(u[i] - uo));
    }
    pts.push_back(pt);
    r.table.rows.push_back(std::move(row));
  }
  r.doc["profile"] = pts;
  if (oracle) {
    const double rel = umax > 0.0 ? err / umax : err;
    const bool pass = rel < c.velocity_tol;
    warn.insert(warn.end(), oracle->warnings.begin(), oracle->warnings.end());
    r.doc["validation"] = {{"velocity_linf_relative", rel}, {"threshold", c.velocity_tol}, {"pass", pass}};
    if (!pass) r.exit_code = exit_validation;
  }
  r.doc["warnings"] = to_json(warn);
  return r;
}

inline CommandResult cmd_friction(const RunConfig& c) {
  const ModelParams p = resolve_params(c);
  const Solution s = solve(p, c.grid);
  const cplx F = friction_force(s);
  CommandResult r;
  r.doc["provenance"] = provenance(c, &p);
  r.doc["kappa"] = s.kappa();
  r.doc["friction"] = to_json(F);
  r.doc["abs"] = std::abs(F);
  r.doc["phase"] = std::arg(F);
  Warnings warn = s.spectrum.warnings;
  r.table.header = {"omega1", "a", "u0", "friction_re", "friction_im", "friction_abs", "friction_phase"};
  std::vector<std::string> row{num(p.omega1), num(p.a), num(p.u0), num(F.real()), num(F.imag()),
                               num(std::abs(F)), num(std::arg(F))};
  if (c.validate) {
    const OracleSolution o = solve_halfspace(p, c.lattice);
    const double rel = std::abs(F - o.friction) / std::abs(o.friction);
    const bool pass = rel < c.friction_tol;
    warn.insert(warn.end(), o.warnings.begin(), o.warnings.end());
    r.doc["validation"] = {{"oracle_friction", to_json(o.friction)},
                           {"relative_error", rel},
                           {"threshold", c.friction_tol},
                           {"pass", pass}};
    r.table.header.insert(r.table.header.end(), {"oracle_re", "oracle_im", "relative_error"});
    row.insert(row.end(), {num(o.friction.real()), num(o.friction.imag()), num(rel)});
    if (!pass) r.exit_code = exit_validation;
  }
  r.table.rows.push_back(std::move(row));
  r.doc["warnings"] = to_json(warn);
  return r;
}

struct Check {
  std::string name;
  double value;
  double threshold;
  bool pass() const { return value < threshold; }
};

/// Internal consistency checks plus the oracle comparison for one parameter set.
inline std::vector<Check> run_checks(const Solution& s, const OracleSolution& o) {
  const ModelParams& p = s.params;
  const RiemannFactorization& f = s.factorization;
  std::vector<Check> out;

  out.push_back({"boundary_residual", boundary_residual(s).max_relative, 1e-3});

  double xerr = 0.0;
  for (double mu : linspace(0.05, 5.0, 200)) {
    const cplx G = coefficient_G(mu, p);
    xerr = std::max(xerr, std::abs(f.X_plus(mu) - G * f.X_minus(mu)) / std::abs(G * f.X_minus(mu)));
  }
  out.push_back({"riemann_jump", xerr, 1e-6});

  double m0 = 0.0, m1 = 0.0;
  for (double eta : linspace(0.1, 4.0, 20)) {
    const Moments m = eigenfunction_moments(eta, p);
    m0 = std::max(m0, std::abs(m.zeroth - p.z0));
    m1 = std::max(m1, std::abs(m.first + I * p.omega1 * eta));
  }
  if (s.kappa() == 1) {
    const cplx e0 = *s.coeffs.eta0;
    const Moments m = discrete_eigenfunction_moments(e0, p);
    m0 = std::max(m0, std::abs(m.zeroth - p.z0));
    m1 = std::max(m1, std::abs(m.first + I * p.omega1 * e0));
    out.push_back({"eta0_residual", s.spectrum.eta0_residual, 1e-10});
  }
  out.push_back({"normalization_moment", m0, 1e-8});
  out.push_back({"first_moment", m1, 1e-8});

  const cplx A = A_from_density(f, s.coeffs);
  // A vanishes identically at a = 0, where the absolute difference is reported
  const double a_scale = std::abs(s.coeffs.A) > 1e-14 ? std::abs(s.coeffs.A) : 1.0;
  out.push_back({"A_self_consistency", std::abs(A - s.coeffs.A) / a_scale, 1e-6});

  const auto xs = linspace(0.0, 10.0, 101);
  const std::vector<double> mus{-0.25, -0.5, -1.0, -1.5, -2.0};
  const ComparisonReport rep = compare_with_analytic(o, assemble_field(s, xs, mus));
  out.push_back({"oracle_velocity", rep.velocity_linf, 1e-2});
  out.push_back({"oracle_friction", rep.friction_error, 1e-2});
  out.push_back({"oracle_wall_distribution", rep.wall_distribution_error, 1e-2});
  return out;
}

inline CommandResult cmd_validate(const RunConfig& c) {
  const ModelParams p = resolve_params(c);
  const Solution s = solve(p, c.grid);
  const OracleSolution o = solve_halfspace(p, c.lattice);
  const std::vector<Check> checks = run_checks(s, o);
  CommandResult r;
  r.doc["provenance"] = provenance(c, &p);
  r.doc["kappa"] = s.kappa();
  json arr = json::array();
  bool all = true;
  r.table.header = {"check", "value", "threshold", "pass"};
  for (const Check& ch : checks) {
    arr.push_back({{"check", ch.name}, {"value", ch.value}, {"threshold", ch.threshold}, {"pass", ch.pass()}});
    r.table.rows.push_back({ch.name, num(ch.value), num(ch.threshold), ch.pass() ? "true" : "false"});
    all = all && ch.pass();
  }
  Warnings warn = s.spectrum.warnings;
  warn.insert(warn.end(), o.warnings.begin(), o.warnings.end());
  r.doc["checks"] = arr;
  r.doc["pass"] = all;
  r.doc["warnings"] = to_json(warn);
  if (!all) r.exit_code = exit_validation;
  return r;
}

inline CommandResult dispatch(const RunConfig& c) {
  if (c.command == "critical-table") return cmd_critical_table(c);
  if (c.command == "spectrum") return cmd_spectrum(c);
  if (c.command == "profile") return cmd_profile(c);
  if (c.command == "friction") return cmd_friction(c);
  if (c.command == "validate") return cmd_validate(c);
  throw UsageError("unknown command '" + c.command + "'");
}

/// Runs a command, mapping library errors onto exit codes. Output text goes to @p out.
inline int run(const RunConfig& c, std::string& out, std::ostream& err) {
  try {
    const CommandResult r = dispatch(c);
    out = render(r, c.format);
    return r.exit_code;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return exit_usage;
  } catch (const DomainError& e) {
    err << "invalid argument: " << e.what() << '\n';
    return exit_usage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_regime;
  }
}

}  // namespace stokes::cli
