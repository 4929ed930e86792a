"""
The connection-problem profile
==============================

Solves u'' = 2u^3 + xu with Airy decay on the right and the square-root
growth branch on the left, then checks both asymptotes and the integral
functionals built on top of the profile.
"""

from gapdet import airy_ai, solve_hm, tw_integral, v_at

sol = solve_hm()
print("grid points: %d   Newton sweeps: %d   residual: %.2e"
      % (sol.x.size, sol.iterations, sol.residual))
print()

print("   x        u(x)          reference")
for x, ref, label in ((8.0, airy_ai(8.0), "Ai(8)"),
                      (6.0, airy_ai(6.0), "Ai(6)"),
                      (0.0, None, ""),
                      (-8.0, 2.0, "sqrt(-x/2)")):
    u = sol.u_at(x)
    if ref is None:
        print(" %5.1f   %.9e" % (x, u))
    else:
        print(" %5.1f   %.9e   %s = %.9e" % (x, u, label, ref))
print()

# v is the tail mass of u^2; its derivative relationship with the moment
# integral is a quick sanity check of both accessors.
h = 1e-4
fd = (tw_integral(sol, h) - tw_integral(sol, -h)) / (2 * h)
print("moment integral at 0:    %.10f" % tw_integral(sol, 0.0))
print("tail mass v at 0:        %.10f" % v_at(sol, 0.0))
print("d(moment)/dx + v:        %.2e  (should vanish)" % (fd + v_at(sol, 0.0)))
