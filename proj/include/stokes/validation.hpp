#pragma once

#include <vector>

#include "stokes/fields.hpp"
#include "stokes/oracle.hpp"

namespace stokes {

inline AnalyticSamples to_samples(const SolutionField& f) {
  return {f.params, f.x_samples, f.velocity_amplitude, f.mu_samples, f.wall_distribution, f.friction_amplitude};
}

inline ComparisonReport compare_with_analytic(const OracleSolution& oracle, const SolutionField& field) {
  return compare(oracle, to_samples(field));
}

/// Runs the oracle for @p p and compares it with an analytic field computed for the same parameters.
inline ComparisonReport compare_with_analytic(const ModelParams& p, const LatticeConfig& cfg,
                                              const SolutionField& field) {
  if (!same_physics(p, field.params)) throw UsageError("compare_with_analytic: field was computed for other parameters");
  return compare(solve_halfspace(p, cfg), to_samples(field));
}

/// Uniform samples lo, lo + step, ..., hi.
inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return v;
}

}  // namespace stokes
