"""
Gap probabilities against their closed-form predictions
========================================================

Computes log det(I - K) on growing intervals for all three kernels and
prints the distance to the matching prediction.  The errors shrink as the
interval grows, which is the whole point of the asymptotic formulas.
"""

from gapdet import (
    CubicSine,
    PII,
    PsiField,
    Sine,
    dyson_sine_prediction,
    log_det,
    log_det_converged,
    solve_hm,
    theorem1_prediction,
    theorem2_prediction,
)

# --- sine kernel: wide intervals ----------------------------------------------

print("sine kernel at x = 1")
print("   s    log det        prediction     |err|")
for s in (4.0, 5.0, 6.0):
    ld = float(log_det(Sine(x=1.0), s, 200).log_det)
    pred = dyson_sine_prediction(s, 1.0).value
    print(" %4.1f  %12.6f  %12.6f   %.2e" % (s, ld, pred, abs(ld - pred)))
print()

# --- cubic trig kernel ----------------------------------------------------------

print("cubic trig kernel at t = 1, x = 1")
print("   s    log det        prediction     |err|")
for s in (1.6, 1.8, 2.0):
    ld = float(log_det_converged(CubicSine(t=1.0, x=1.0), s).log_det)
    pred = theorem2_prediction(s, 1.0).value
    print(" %4.1f  %12.6f  %12.6f   %.2e" % (s, ld, pred, abs(ld - pred)))
print()

# --- rank-structured kernel ------------------------------------------------------

sol = solve_hm()
print("rank-structured kernel at x = 0 (refined prediction)")
print("   s    log det        prediction     |err|")
spec = PII(x=0.0, field=PsiField(x=0.0, hm=sol))
for s in (1.6, 1.8, 2.0):
    ld = float(log_det_converged(spec, s).log_det)
    pred = theorem1_prediction(s, 0.0, sol).value
    print(" %4.1f  %12.6f  %12.6f   %.2e" % (s, ld, pred, abs(ld - pred)))
