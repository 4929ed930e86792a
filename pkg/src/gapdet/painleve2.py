"""Hastings-McLeod boundary-value solver for u'' = x u + 2 u^3.

The solution is pinned by u ~ Ai(x) on the right and u ~ sqrt(-x/2) on the
left.  A damped Newton iteration on second-order central differences solves
the two-point problem; derivatives come from fourth-order stencils on the
converged grid, and v = (u_x)^2 - x u^2 - u^4 is formed pointwise.  The
auxiliary quantity v shows up in the logarithmic-derivative expansions and
in the far-field initialization of the linear system solved in psi.py.

Accuracy notes.  The left boundary uses only the leading asymptote, so a
~1e-3 truncation error lives in a boundary layer near x_left; keep working
queries inside [x_left + 1, x_right - 1].  The discrete residual of a
converged grid cannot drop below about 2 eps |u| / h^2 (one half-ulp of a
stored value already moves it that much), which is ~4e-10 at the default
h = 0.002; the Newton loop therefore targets 1e-10 but accepts a stall
anywhere below 1e-8.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.linalg import solve_banded

from .mpnum import gauss_legendre
from .specfun import airy_ai, airy_ai_prime

__all__ = [
    "HastingsMcLeodSolution",
    "NewtonDivergenceError",
    "WrongBranchError",
    "solve_hm",
    "tw_integral",
    "v_at",
]


class NewtonDivergenceError(RuntimeError):
    """Newton residuals grew over five successive iterations.

    ``trace`` holds the residual history for post-mortem inspection.
    """

    def __init__(self, trace):
        self.trace = list(trace)
        super().__init__(
            f"Newton did not converge after {len(self.trace)} iterations, "
            f"residual history {self.trace[-6:]}"
        )


class WrongBranchError(RuntimeError):
    """The iteration left the positive solution branch."""


@dataclass(frozen=True)
class HastingsMcLeodSolution:
    """Grid representation of u, u_x and v on [x_left, x_right].

    Immutable once built; the cubic interpolants are constructed eagerly and
    shared freely across threads.
    """

    x_left: float
    x_right: float
    h: float
    x: np.ndarray
    u: np.ndarray
    u_x: np.ndarray
    v: np.ndarray
    residual: float
    iterations: int
    _u_spline: CubicSpline = field(repr=False, compare=False, default=None)
    _ux_spline: CubicSpline = field(repr=False, compare=False, default=None)
    _v_spline: CubicSpline = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "_u_spline", CubicSpline(self.x, self.u))
        object.__setattr__(self, "_ux_spline", CubicSpline(self.x, self.u_x))
        object.__setattr__(self, "_v_spline", CubicSpline(self.x, self.v))

    def _check(self, x: float):
        if not self.x_left <= x <= self.x_right:
            raise ValueError(
                f"x = {x} outside the solved window [{self.x_left}, {self.x_right}]"
            )

    def u_at(self, x: float) -> float:
        self._check(x)
        return float(self._u_spline(x))

    def u_x_at(self, x: float) -> float:
        self._check(x)
        return float(self._ux_spline(x))


def _initial_guess(x: np.ndarray) -> np.ndarray:
    # smooth crossfade between the two boundary asymptotes; the logistic
    # window keeps the Airy factor from ever seeing x < -10
    w = 1.0 / (1.0 + np.exp(2.0 * x))
    left = np.sqrt(np.maximum(-x, 0.0) / 2.0)
    right = airy_ai(np.clip(x, -10.0, 30.0))
    return w * left + (1.0 - w) * right


def _deriv4(u: np.ndarray, h: np.float64) -> np.ndarray:
    """Fourth-order first derivative on a uniform grid."""
    n = len(u)
    d = np.empty_like(u)
    d[2:-2] = (-u[4:] + 8.0 * u[3:-1] - 8.0 * u[1:-3] + u[:-4]) / (12.0 * h)
    d[0] = (-25.0 * u[0] + 48.0 * u[1] - 36.0 * u[2] + 16.0 * u[3] - 3.0 * u[4]) / (12.0 * h)
    d[1] = (-3.0 * u[0] - 10.0 * u[1] + 18.0 * u[2] - 6.0 * u[3] + u[4]) / (12.0 * h)
    d[n - 2] = (3.0 * u[n - 1] + 10.0 * u[n - 2] - 18.0 * u[n - 3] + 6.0 * u[n - 4] - u[n - 5]) / (12.0 * h)
    d[n - 1] = (25.0 * u[n - 1] - 48.0 * u[n - 2] + 36.0 * u[n - 3] - 16.0 * u[n - 4] + 3.0 * u[n - 5]) / (12.0 * h)
    return d


def _interior_residual(u, x, h):
    return (u[:-2] - 2.0 * u[1:-1] + u[2:]) / (h * h) - x[1:-1] * u[1:-1] - 2.0 * u[1:-1] ** 3


def solve_hm(x_left: float = -10.0, x_right: float = 8.0, h: float = 0.002,
             _u0: Optional[np.ndarray] = None) -> HastingsMcLeodSolution:
    """Solve the positive-branch boundary-value problem on [x_left, x_right].

    ``x_left <= -8``, ``6 <= x_right <= 40`` and ``0 < h <= 1/100`` are
    required; h is nudged so the window divides evenly.  ``_u0`` overrides
    the initial guess and exists for the failure-path tests.

    Raises NewtonDivergenceError when the residual grows five iterations in
    a row and WrongBranchError when the iterate leaves u > 0.
    """
    if x_left > -8.0:
        raise ValueError(f"x_left = {x_left} must be <= -8")
    if not 6.0 <= x_right <= 40.0:
        raise ValueError(f"x_right = {x_right} must lie in [6, 40]")
    if not 0.0 < h <= 0.01:
        raise ValueError(f"h = {h} must lie in (0, 1/100]")

    n_steps = int(round((x_right - x_left) / h))
    h = (x_right - x_left) / n_steps
    x = x_left + h * np.arange(n_steps + 1)

    u = _initial_guess(x) if _u0 is None else np.array(_u0, dtype=float)
    if len(u) != len(x):
        raise ValueError("initial guess does not match the grid")
    u[0] = np.sqrt(-x_left / 2.0)
    u[-1] = airy_ai(x_right)

    trace = []
    growth = 0
    prev_rn = np.inf
    rn = np.inf
    for it in range(80):
        F = _interior_residual(u, x, h)
        rn = float(np.max(np.abs(F)))
        trace.append(rn)
        if rn <= 1e-10:
            break
        if rn <= 1e-8 and rn > 0.25 * prev_rn:
            break  # rounding floor of the residual, see module docstring
        if rn >= prev_rn:
            growth += 1
            if growth >= 5:
                raise NewtonDivergenceError(trace)
        else:
            growth = 0

        ab = np.zeros((3, len(x) - 2))
        ab[0, 1:] = 1.0 / (h * h)
        ab[1, :] = -2.0 / (h * h) - x[1:-1] - 6.0 * u[1:-1] ** 2
        ab[2, :-1] = 1.0 / (h * h)
        delta = solve_banded((1, 1), ab, -F)

        lam = 1.0
        for _ in range(30):
            cand = u.copy()
            cand[1:-1] += lam * delta
            if np.max(np.abs(_interior_residual(cand, x, h))) < rn:
                break
            lam *= 0.5
        u = u.copy()
        u[1:-1] += lam * delta
        if np.min(u) < -1e-3:
            raise WrongBranchError(
                f"iterate reached u = {np.min(u):.3e} < 0 at iteration {it}"
            )
        prev_rn = rn
    else:
        raise NewtonDivergenceError(trace)

    if np.min(u) <= 0.0:
        raise WrongBranchError(
            f"converged to a non-positive branch, min u = {np.min(u):.3e}"
        )

    u_x = _deriv4(u, h)
    v = u_x * u_x - x * u * u - u ** 4
    return HastingsMcLeodSolution(
        x_left=float(x_left), x_right=float(x_right), h=float(h),
        x=x, u=u, u_x=u_x, v=v, residual=rn, iterations=len(trace),
    )


def v_at(sol: HastingsMcLeodSolution, x: float) -> float:
    """Cubic interpolation of v = (u_x)^2 - x u^2 - u^4 at x."""
    sol._check(x)
    return float(sol._v_spline(x))


_GL24 = None


def _gl24():
    global _GL24
    if _GL24 is None:
        r = gauss_legendre(24)
        _GL24 = (r.nodes_f8, r.weights_f8)
    return _GL24


def _airy_tail_moment(big_x: float, x: float) -> float:
    """integral over [big_x, inf) of (y - x) Ai(y)^2 dy, in closed form.

    Both pieces integrate exactly against Ai'' = y Ai:
    int (y-X) Ai^2 = (2/3) X^2 Ai^2 - (2/3) X Ai'^2 - (1/3) Ai Ai' and
    int Ai^2 = Ai'^2 - X Ai^2, evaluated at X = big_x.
    """
    a = airy_ai(big_x)
    ap = airy_ai_prime(big_x)
    second = (2.0 / 3.0) * big_x ** 2 * a * a - (2.0 / 3.0) * big_x * ap * ap - (1.0 / 3.0) * a * ap
    zeroth = ap * ap - big_x * a * a
    return second + (big_x - x) * zeroth


def tw_integral(sol: HastingsMcLeodSolution, x: float) -> float:
    """integral over [x, inf) of (y - x) u(y)^2 dy.

    Composite Gauss quadrature over [x, x_right] on the interpolated u plus
    the closed-form Airy tail; the window edges are excluded because the
    boundary layers there are not trustworthy.
    """
    if not sol.x_left + 1.0 <= x <= sol.x_right - 1.0:
        raise ValueError(
            f"x = {x} outside [{sol.x_left + 1.0}, {sol.x_right - 1.0}]"
        )
    nodes, weights = _gl24()
    total = 0.0
    n_panels = max(1, int(np.ceil((sol.x_right - x) / 2.0)))
    edges = np.linspace(x, sol.x_right, n_panels + 1)
    for a, b in zip(edges[:-1], edges[1:]):
        mid, rad = 0.5 * (a + b), 0.5 * (b - a)
        y = mid + rad * nodes
        uy = sol._u_spline(y)
        total += rad * float(np.sum(weights * (y - x) * uy * uy))
    return float(total + _airy_tail_moment(sol.x_right, x))
