#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "stokes/cli.hpp"

namespace {

void add_common(CLI::App* sub, stokes::cli::RunConfig& c, bool physics, bool lattice) {
  static const std::map<std::string, stokes::cli::Format> formats{{"json", stokes::cli::Format::json},
                                                                  {"csv", stokes::cli::Format::csv}};
  sub->add_option("--format", c.format, "Output format")->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  sub->add_option("--out", c.out, "Output file (default: standard output)");
  if (physics) {
    sub->add_option("--omega1", c.omega1, "Dimensionless wall frequency omega*tau (> 0)");
    auto* a = sub->add_option("--a", c.a, "ES model parameter in [-1, 0]");
    auto* pr = sub->add_option("--prandtl", c.prandtl, "Prandtl number in [2/3, 1]");
    a->excludes(pr);
    sub->add_option("--u0", c.u0, "Wall velocity amplitude (default 1)");
    sub->add_option("--tau-max", c.grid.tau_max, "Spectral grid cutoff");
    sub->add_option("--panel", c.grid.panel_width, "Spectral panel width");
  }
  if (lattice) {
    sub->add_option("--xmax", c.lattice.x_max, "Oracle domain length");
    sub->add_option("--nx", c.lattice.nx, "Oracle spatial cells");
    sub->add_option("--nmu", c.lattice.n_mu, "Oracle ordinates per half-range");
    sub->add_option("--tol", c.lattice.tol, "Oracle solver tolerance");
    sub->add_option("--max-iter", c.lattice.max_iter, "Oracle iteration cap");
  }
}

}  // namespace

int main(int argc, char** argv) {
  stokes::cli::RunConfig cfg;
  CLI::App app{"Oscillating-plate (second Stokes problem) solver for the ES kinetic model"};
  app.require_subcommand(1);

  auto* table = app.add_subcommand("critical-table", "Critical frequencies for a = 0, -0.1, ..., -1");
  add_common(table, cfg, false, false);

  auto* spectrum = app.add_subcommand("spectrum", "Index, zero count and discrete eigenvalue");
  add_common(spectrum, cfg, true, false);

  double x_end = 10.0;
  int x_points = 101;
  auto* profile = app.add_subcommand("profile", "Velocity amplitude profile U_y(x)/U0");
  add_common(profile, cfg, true, true);
  profile->add_option("--x", cfg.x, "Comma-separated heights x1")->delimiter(',');
  profile->add_option("--x-end", x_end, "Upper end of the default uniform x grid");
  profile->add_option("--x-points", x_points, "Points of the default uniform x grid")->check(CLI::PositiveNumber);
  profile->add_flag("--validate", cfg.validate, "Compare with the discrete-ordinates solver");

  auto* friction = app.add_subcommand("friction", "Normalized friction amplitude");
  add_common(friction, cfg, true, true);
  friction->add_flag("--validate", cfg.validate, "Compare with the discrete-ordinates solver");

  auto* validate = app.add_subcommand("validate", "Run every consistency and oracle check");
  add_common(validate, cfg, true, true);
  validate->add_flag("--validate", cfg.validate, "Accepted for symmetry; always on");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return stokes::cli::exit_usage;
  }

  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
  if (cfg.command == "profile" && cfg.x.empty()) cfg.x = stokes::linspace(0.0, x_end, x_points);

  std::string text;
  const int code = stokes::cli::run(cfg, text, std::cerr);
  if (code == stokes::cli::exit_usage || code == stokes::cli::exit_regime) return code;
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) {
      std::cerr << "cannot open " << cfg.out << " for writing\n";
      return stokes::cli::exit_usage;
    }
    f << text;
  }
  return code;
}
