#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>
#include <string>

#include "stokes/cli.hpp"

using namespace stokes;
using namespace stokes::cli;

namespace {

RunConfig config(std::string command, double omega1, double a) {
  RunConfig c;
  c.command = std::move(command);
  c.omega1 = omega1;
  c.a = a;
  return c;
}

json run_json(const RunConfig& c, int expected_exit = exit_ok) {
  std::string out;
  std::ostringstream err;
  EXPECT_EQ(run(c, out, err), expected_exit) << err.str();
  return json::parse(out);
}

bool has(const json& warnings, const std::string& w) {
  return std::find(warnings.begin(), warnings.end(), w) != warnings.end();
}

}  // namespace

TEST(CriticalTable, RowsAndMonotonicity) {
  RunConfig c;
  c.command = "critical-table";
  const json doc = run_json(c);
  ASSERT_EQ(doc["rows"].size(), 11u);
  EXPECT_NEAR(doc["rows"][0]["omega1_star"].get<double>(), 0.733, 5e-3);
  EXPECT_EQ(doc["rows"][0]["a"].get<double>(), 0.0);
  EXPECT_NEAR(doc["rows"][10]["omega1_star"].get<double>(), 0.637, 5e-3);
  EXPECT_NEAR(doc["rows"][10]["prandtl"].get<double>(), 2.0 / 3.0, 1e-15);
  EXPECT_TRUE(doc["strictly_decreasing"].get<bool>());
  for (const auto& row : doc["rows"])
    EXPECT_NEAR(row["deviation"].get<double>(),
                row["omega1_star"].get<double>() - row["omega1_star_tabulated"].get<double>(), 1e-15);
}

TEST(Spectrum, TabulatedRegimes) {
  const json k1 = run_json(config("spectrum", 0.3, -1.0));
  EXPECT_EQ(k1["kappa"], 1);
  EXPECT_LT(k1["eta0_residual"].get<double>(), 1e-10);
  EXPECT_GT(k1["eta0"]["re"].get<double>(), 0.0);
  const json k0 = run_json(config("spectrum", 1.0, -1.0));
  EXPECT_EQ(k0["kappa"], 0);
  EXPECT_TRUE(k0["eta0"].is_null());
}

TEST(Spectrum, PrandtlEquivalentToA) {
  RunConfig c = config("spectrum", 0.3, -1.0);
  c.a.reset();
  c.prandtl = 2.0 / 3.0;
  const json byp = run_json(c);
  const json bya = run_json(config("spectrum", 0.3, -1.0));
  EXPECT_EQ(byp["eta0"], bya["eta0"]);
  EXPECT_EQ(byp["provenance"]["parameters"]["a"], -1.0);
}

TEST(Profile, FirstRowIsWallVelocity) {
  RunConfig c = config("profile", 0.3, -1.0);
  c.x = {0.0, 0.5, 2.0};
  const json doc = run_json(c);
  const cplx wall = wall_velocity(solve(ModelParams::make(0.3, -1.0)));
  ASSERT_EQ(doc["profile"].size(), 3u);
  EXPECT_EQ(doc["profile"][0]["u"]["re"].get<double>(), wall.real());
  EXPECT_EQ(doc["profile"][0]["u"]["im"].get<double>(), wall.imag());
}

TEST(Profile, RejectsNegativeAbscissa) {
  RunConfig c = config("profile", 0.3, -1.0);
  c.x = {-1.0};
  std::string out;
  std::ostringstream err;
  EXPECT_EQ(run(c, out, err), exit_usage);
}

TEST(Profile, ValidateAgainstOracle) {
  RunConfig c = config("profile", 1.0, -1.0);
  c.validate = true;
  const json doc = run_json(c);
  EXPECT_TRUE(doc["validation"]["pass"].get<bool>());
  EXPECT_LT(doc["validation"]["velocity_linf_relative"].get<double>(), 1e-2);
  EXPECT_TRUE(doc["profile"][0].contains("oracle"));
  EXPECT_EQ(doc["provenance"]["lattice"]["nx"], 2000);
}

TEST(Friction, VanishesAtLowFrequency) {
  const double hi = std::hypot(run_json(config("friction", 0.1, -1.0))["friction"]["re"].get<double>(),
                               run_json(config("friction", 0.1, -1.0))["friction"]["im"].get<double>());
  const double lo = run_json(config("friction", 0.001, -1.0))["abs"].get<double>();
  EXPECT_LT(lo, hi);
  EXPECT_LT(lo, 0.05);
}

TEST(Friction, IndependentOfWallVelocity) {
  RunConfig c = config("friction", 1.0, -1.0);
  const double f1 = run_json(c)["abs"].get<double>();
  c.u0 = 3.0;
  const double f3 = run_json(c)["abs"].get<double>();
  EXPECT_NEAR(f1, f3, 1e-13);
}

TEST(Friction, ValidateAgainstOracle) {
  RunConfig c = config("friction", 1.0, -1.0);
  c.validate = true;
  const json doc = run_json(c);
  EXPECT_LT(doc["validation"]["relative_error"].get<double>(), 1e-2);
}

TEST(Validate, AllChecksPassBothRegimes) {
  for (auto [w, a] : {std::pair{1.0, -1.0}, {0.3, -1.0}}) {
    const json doc = run_json(config("validate", w, a));
    EXPECT_TRUE(doc["pass"].get<bool>()) << doc.dump(2);
    EXPECT_GE(doc["checks"].size(), 8u);
  }
}

TEST(Validate, NearCriticalWarning) {
  const json doc = run_json(config("validate", 0.63, -1.0));
  EXPECT_TRUE(has(doc["warnings"], "near_tabulated_critical")) << doc["warnings"].dump();
}

TEST(Spectrum, NearCriticalWarning) {
  const json doc = run_json(config("spectrum", 0.63, -1.0));
  EXPECT_TRUE(has(doc["warnings"], "near_tabulated_critical"));
  EXPECT_FALSE(has(doc["warnings"], "tabulated_criterion_disagrees"));
  // between the tabulated frequency and the index flip the two criteria disagree
  const json mid = run_json(config("spectrum", 0.66, -1.0));
  EXPECT_TRUE(has(mid["warnings"], "tabulated_criterion_disagrees"));
  EXPECT_EQ(mid["kappa"], 1);
}

TEST(ExitCodes, UsageErrors) {
  std::string out;
  std::ostringstream err;
  RunConfig missing = config("spectrum", 0.3, -1.0);
  missing.a.reset();
  EXPECT_EQ(run(missing, out, err), exit_usage);
  RunConfig both = config("spectrum", 0.3, -1.0);
  both.prandtl = 1.0;
  EXPECT_EQ(run(both, out, err), exit_usage);
  EXPECT_EQ(run(config("spectrum", -0.3, -1.0), out, err), exit_usage);
  EXPECT_EQ(run(config("nonsense", 0.3, -1.0), out, err), exit_usage);
  RunConfig no_omega = config("friction", 0.3, -1.0);
  no_omega.omega1.reset();
  EXPECT_EQ(run(no_omega, out, err), exit_usage);
}

TEST(ExitCodes, ConvergenceFailure) {
  RunConfig c = config("friction", 1.0, -1.0);
  c.validate = true;
  c.lattice.max_iter = 2;
  std::string out;
  std::ostringstream err;
  EXPECT_EQ(run(c, out, err), exit_regime);
  EXPECT_NE(err.str().find("no convergence"), std::string::npos);
}

TEST(Output, ByteIdenticalRepeats) {
  for (Format f : {Format::json, Format::csv}) {
    RunConfig c = config("profile", 0.3, -1.0);
    c.format = f;
    std::string a, b;
    std::ostringstream err;
    ASSERT_EQ(run(c, a, err), exit_ok);
    ASSERT_EQ(run(c, b, err), exit_ok);
    EXPECT_EQ(a, b);
  }
}

TEST(Output, CsvLayout) {
  RunConfig c = config("profile", 0.3, -1.0);
  c.format = Format::csv;
  c.x = {0.0, 1.0};
  std::string out;
  std::ostringstream err;
  ASSERT_EQ(run(c, out, err), exit_ok);
  EXPECT_EQ(out.rfind("x,u_re,u_im,u_abs,u_phase\n", 0), 0u);
  EXPECT_EQ(std::count(out.begin(), out.end(), '\n'), 3);
  EXPECT_EQ(out.back(), '\n');
  std::istringstream rows(out);
  std::string header, row;
  std::getline(rows, header);
  std::getline(rows, row);
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 4);
  EXPECT_EQ(row.rfind("0,", 0), 0u);
}

TEST(Output, JsonCarriesProvenance) {
  const json doc = run_json(config("friction", 1.0, -1.0));
  const auto& p = doc["provenance"];
  EXPECT_EQ(p["command"], "friction");
  EXPECT_EQ(p["parameters"]["omega1"], 1.0);
  EXPECT_EQ(p["parameters"]["u0"], 1.0);
  EXPECT_EQ(p["grid"]["tau_max"], 7.0);
  EXPECT_TRUE(doc["warnings"].is_array());
  EXPECT_TRUE(doc["friction"].contains("re"));
  EXPECT_TRUE(doc["friction"].contains("im"));
}

TEST(Formatting, ShortestRoundTrip) {
  EXPECT_EQ(num(0.1), "0.1");
  EXPECT_EQ(num(-2.5e-12), "-2.5e-12");
  EXPECT_EQ(std::stod(num(1.0 / 3.0)), 1.0 / 3.0);
  EXPECT_EQ(num(NAN), "nan");
}
