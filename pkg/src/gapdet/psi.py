"""First column of the 2x2 linear system built on the Hastings-McLeod
solution, at real spectral parameter lambda.

Two transport routes are implemented.

The production route marches in x: the column is seeded far to the right
(default x = 12.5) with its closed-form large-x behavior
psi11 ~ e^{-i theta}, psi21 ~ -i e^{+i theta}, theta = (4/3) lambda^3 + x
lambda, where the seeding error is of order x^{-1/4} exp(-(2/3) x^{3/2}),
about 1e-14 at 12.5, and then integrated down to the target x with
d psi/dx = U(lambda, x) psi, U = [[-i lambda, i u], [-i u, i lambda]].
For real lambda both fundamental solutions have constant modulus, so the
march is neutrally stable, needs no phase extraction, and preserves the
conjugation symmetry conj(psi21) = i psi11 to the last bit (which is what
makes the downstream kernel exactly real).

The lambda-ray route integrates the phase-extracted column phi = psi
e^{i theta} in the spectral variable from lambda0 = iR with the first-order
far-field seed phi = (1 - iv/(2 lambda0), u/(2 lambda0)).  Its seed carries
a multiplicative O(R^-2) bias (the second-order moment of the far-field
expansion is not available in closed form from the inputs we keep), which
is harmless for cross-checks and large x but too coarse for determinants
whose top eigenvalue sits within 1e-8 of 1.  It is retained as
psi_column_ray for path-independence and convergence tests; psi_column is
the x-march.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .painleve2 import HastingsMcLeodSolution, v_at
from .specfun import airy_ai

__all__ = [
    "PhaseExtractedColumn",
    "PsiField",
    "StiffnessError",
    "psi_column",
    "psi_columns",
    "psi_column_derivative",
    "psi_column_ray",
    "psi_det",
]


class StiffnessError(RuntimeError):
    """Adaptive step size underflowed; ``position`` is where it happened."""

    def __init__(self, position):
        self.position = position
        super().__init__(f"step size underflow at path position {position}")


@dataclass(frozen=True)
class PhaseExtractedColumn:
    """phi = psi * e^{i theta} for the first column, with its phase.

    For real lambda the phase factor is unimodular, so |psi| = |phi|
    componentwise; psi11 and psi21 are reconstructed on demand.
    """

    lam: float
    phi1: complex
    phi2: complex
    theta: complex

    @property
    def psi11(self) -> complex:
        return self.phi1 * np.exp(-1j * self.theta)

    @property
    def psi21(self) -> complex:
        return self.phi2 * np.exp(-1j * self.theta)


@dataclass(eq=False)
class PsiField:
    """Evaluation context: the parameter x, the potential, and a column cache.

    ``hm`` may be None, in which case the potential u is identically zero (a
    hook the tests use, since the system is then diagonal and solvable on
    paper).  Cache keys are exact binary64 lambdas; concurrent writers at
    worst recompute identical values, so last-write-wins is safe.
    """

    x: float
    hm: Optional[HastingsMcLeodSolution]
    x_start: float = 12.5
    tol: float = 1e-12
    cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.hm is not None and not self.hm.x_left <= self.x <= self.hm.x_right:
            raise ValueError(
                f"x = {self.x} outside the solved window "
                f"[{self.hm.x_left}, {self.hm.x_right}]"
            )

    def _u(self, x: float) -> float:
        if self.hm is None:
            return 0.0
        if x > self.hm.x_right:
            return airy_ai(min(x, 40.0))
        return float(self.hm._u_spline(x))

    def _u_ux_v_here(self):
        if self.hm is None:
            return 0.0, 0.0, 0.0
        return self.hm.u_at(self.x), self.hm.u_x_at(self.x), v_at(self.hm, self.x)


# ---------------------------------------------------------------------------
# embedded Runge-Kutta 4(5), Dormand-Prince coefficients
# ---------------------------------------------------------------------------

_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])


def _integrate(rhs, t0: float, t1: float, y0: np.ndarray, tol: float) -> np.ndarray:
    """Adaptive RK4(5) from t0 to t1 for complex array state.

    The error measure is max over all state components relative to
    1 + max|y|, so a batch shares one step sequence.  Raises StiffnessError
    when the step collapses below 1e-12 of the interval scale.
    """
    y = np.array(y0, dtype=complex)
    t = t0
    span = t1 - t0
    if span == 0.0:
        return y
    direction = 1.0 if span > 0 else -1.0
    h = span / 64.0
    h_min = 1e-12 * (1.0 + abs(span))

    while (t1 - t) * direction > 0.0:
        h_step = h
        if (t + h_step - t1) * direction > 0.0:
            h_step = t1 - t
        k = [rhs(t, y)]
        for i in range(1, 7):
            yi = y + h_step * sum(a * kk for a, kk in zip(_A[i], k))
            k.append(rhs(t + _C[i] * h_step, yi))
        y5 = y + h_step * sum(b * kk for b, kk in zip(_B5, k) if b != 0.0)
        y4 = y + h_step * sum(b * kk for b, kk in zip(_B4, k) if b != 0.0)
        err = float(np.max(np.abs(y5 - y4))) / (1.0 + float(np.max(np.abs(y5))))
        if err <= tol:
            t = t + h_step
            y = y5
            factor = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * (tol / err) ** 0.2))
        else:
            factor = max(0.2, 0.9 * (tol / err) ** 0.2)
        h = h_step * factor
        # a collapsing step only matters while strictly inside the interval;
        # the clamped final step is legitimately tiny
        if abs(h) < h_min and (t1 - t) * direction > 0.0:
            raise StiffnessError(t)
    return y


# ---------------------------------------------------------------------------
# x-march transport
# ---------------------------------------------------------------------------

def _theta(lam, x):
    return (4.0 / 3.0) * lam ** 3 + x * lam


def _march(field_: PsiField, lams: np.ndarray, want_matrix: bool) -> np.ndarray:
    """Integrate the x-equation from the far-field seed down to field_.x.

    Returns shape (m, 2) column states, or (m, 2, 2) frames when
    ``want_matrix`` (the frame seeds a unit-determinant matrix whose first
    column is the column seed, for determinant checks).
    """
    lams = np.asarray(lams, dtype=float)
    th0 = _theta(lams, field_.x_start)
    e_minus = np.exp(-1j * th0)
    e_plus = np.exp(1j * th0)
    if want_matrix:
        y0 = np.zeros((len(lams), 2, 2), dtype=complex)
        y0[:, 0, 0] = e_minus
        y0[:, 1, 0] = -1j * e_plus
        y0[:, 1, 1] = e_plus
    else:
        y0 = np.stack([e_minus, -1j * e_plus], axis=1)

    lam_col = lams[:, None] if want_matrix else lams

    def rhs(x, y):
        u = field_._u(x)
        row1 = -1j * lam_col * y[:, 0] + 1j * u * y[:, 1]
        row2 = -1j * u * y[:, 0] + 1j * lam_col * y[:, 1]
        return np.stack([row1, row2], axis=1)

    return _integrate(rhs, field_.x_start, field_.x, y0, field_.tol)


def psi_columns(field_: PsiField, lams) -> list:
    """Columns at many lambdas, marched together and cached.

    One adaptive step sequence serves the whole batch, which is what makes
    a 256-node kernel assembly affordable.
    """
    lams = [float(v) for v in np.atleast_1d(np.asarray(lams, dtype=float))]
    for lam in lams:
        if abs(lam) > 4.0:
            raise ValueError(f"|lambda| = {abs(lam)} exceeds 4")
    missing = [lam for lam in lams if lam not in field_.cache]
    if missing:
        ys = _march(field_, np.array(missing), want_matrix=False)
        th = _theta(np.array(missing), field_.x)
        phase = np.exp(1j * th)
        for i, lam in enumerate(missing):
            field_.cache[lam] = PhaseExtractedColumn(
                lam=lam,
                phi1=complex(ys[i, 0] * phase[i]),
                phi2=complex(ys[i, 1] * phase[i]),
                theta=complex(th[i]),
            )
    return [field_.cache[lam] for lam in lams]


def psi_column(field_: PsiField, lam: float) -> PhaseExtractedColumn:
    """Column at one lambda (|lambda| <= 4), from the cache when present."""
    return psi_columns(field_, [lam])[0]


def psi_column_derivative(field_: PsiField, lam: float):
    """d psi / d lambda of the first column, read off the spectral equation.

    The coefficient matrix of the lambda-equation is evaluated with the
    cached column, so this costs one cache lookup after the first call.
    """
    col = psi_column(field_, lam)
    u, ux, _ = field_._u_ux_v_here()
    x = field_.x
    a11 = -1j * (4.0 * lam ** 2 + x + 2.0 * u * u)
    a12 = 4j * lam * u - 2.0 * ux
    a21 = -4j * lam * u - 2.0 * ux
    p1, p2 = col.psi11, col.psi21
    return a11 * p1 + a12 * p2, a21 * p1 - a11 * p2


def psi_det(field_: PsiField, lam: float) -> complex:
    """det of the full 2x2 frame transported to field_.x.

    The seed has unit determinant and the x-equation is trace free, so any
    deviation from 1 measures transport error.
    """
    if abs(lam) > 4.0:
        raise ValueError(f"|lambda| = {abs(lam)} exceeds 4")
    y = _march(field_, np.array([lam]), want_matrix=True)[0]
    return complex(y[0, 0] * y[1, 1] - y[0, 1] * y[1, 0])


# ---------------------------------------------------------------------------
# lambda-ray transport (cross-check route)
# ---------------------------------------------------------------------------

def _ray_rhs_factory(field_: PsiField):
    u, ux, _ = field_._u_ux_v_here()
    x = field_.x
    u2 = u * u

    def bmat(lam):
        b11 = -2j * u2
        b12 = 4j * lam * u - 2.0 * ux
        b21 = -4j * lam * u - 2.0 * ux
        b22 = 8j * lam ** 2 + 2j * x + 2j * u2
        return b11, b12, b21, b22

    return bmat


def psi_column_ray(field_: PsiField, lam: float, R: float = 8.0,
                   path: str = "dogleg", tol: float = 1e-13) -> PhaseExtractedColumn:
    """Phase-extracted column integrated along rays in the spectral plane.

    Starts at lambda0 = iR from the first-order far-field seed and follows
    either the dog-leg iR -> 0 -> lam (default) or the straight segment
    iR -> lam.  The result is entire in lambda, so the two paths must agree;
    the suite checks that.  Seed bias is O(R^-2): good for property tests,
    not for production determinants (see module docstring).

    The local tolerance sits below the x-march's because error accumulates
    over a leg of length ~R where the phase turns at rate 8 lambda^2; the
    two-path agreement degrades roughly linearly in tol.
    """
    if abs(lam) > 4.0:
        raise ValueError(f"|lambda| = {abs(lam)} exceeds 4")
    if path not in ("dogleg", "direct"):
        raise ValueError(f"unknown path {path!r}")
    u, ux, v = field_._u_ux_v_here()
    lam0 = 1j * R
    y = np.array([1.0 - 1j * v / (2.0 * lam0), u / (2.0 * lam0)], dtype=complex)
    bmat = _ray_rhs_factory(field_)

    legs = [(lam0, 0.0 + 0j), (0.0 + 0j, complex(lam))] if path == "dogleg" \
        else [(lam0, complex(lam))]
    for a, b in legs:
        if a == b:
            continue
        d = b - a

        def rhs(tau, yy, a=a, d=d):
            b11, b12, b21, b22 = bmat(a + tau * d)
            return np.array([
                d * (b11 * yy[0] + b12 * yy[1]),
                d * (b21 * yy[0] + b22 * yy[1]),
            ])

        y = _integrate(rhs, 0.0, 1.0, y, tol)

    th = _theta(lam, field_.x)
    return PhaseExtractedColumn(lam=float(lam), phi1=complex(y[0]),
                                phi2=complex(y[1]), theta=complex(th))
