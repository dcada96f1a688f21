// Velocity amplitude, wall slip and friction for argon-like gas (Pr = 2/3)
// across the two spectral regimes, checked against the discrete-ordinates solver.

#include <cstdio>
#include <vector>

#include "stokes/fields.hpp"
#include "stokes/oracle.hpp"
#include "stokes/validation.hpp"

int main() {
  using namespace stokes;
  const double a = a_from_prandtl(2.0 / 3.0);
  std::printf("critical frequency %.5f, index transition %.5f\n", critical_frequency(a),
              index_transition_frequency(a));

  for (double omega1 : {0.3, 1.0}) {
    const ModelParams p = ModelParams::make(omega1, a);
    const Solution s = solve(p);
    const cplx u = wall_velocity(s);
    const cplx f = friction_force(s);
    std::printf("\nomega1 = %.2f  kappa = %d", omega1, s.kappa());
    if (s.spectrum.eta0) std::printf("  eta0 = %.6f%+.6fi", s.spectrum.eta0->real(), s.spectrum.eta0->imag());
    std::printf("\n  wall velocity %.6f%+.6fi   friction %.6f%+.6fi\n", u.real(), u.imag(), f.real(), f.imag());
    std::printf("  boundary residual %.2e\n", boundary_residual(s).max_relative);

    const OracleSolution o = solve_halfspace(p);
    std::printf("  oracle friction  %.6f%+.6fi  (%d Krylov steps)\n", o.friction.real(), o.friction.imag(),
                o.iterations);
    std::printf("      x        Re U        Im U     oracle Re   oracle Im\n");
    for (double x : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0}) {
      const cplx ua = velocity_amplitude(s, x);
      const cplx uo = o.velocity_at(x);
      std::printf("  %5.2f  %10.6f  %10.6f  %10.6f  %10.6f\n", x, ua.real(), ua.imag(), uo.real(), uo.imag());
    }
  }
}
