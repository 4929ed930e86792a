"""Airy functions on the real line and the constants of the gap expansions.

The Airy pair is hand-rolled because the rest of the package needs it at
known, documented accuracy on [-10, 40] without pulling in a special-function
library.  The Maclaurin branch runs in double-double: binary64 alone loses
about eleven digits to cancellation near the top of the series range, and six
near x = -10.  The asymptotic branch runs in binary64 with optimal
truncation; at the x = 7 switch point its best achievable relative error is
about 8e-13, which sets the 1e-12 accuracy promise of the module.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mpnum import (
    ExtendedReal,
    dd_add,
    dd_div_f,
    dd_mul,
    dd_mul_f,
)

__all__ = [
    "Constants",
    "CONSTANTS",
    "airy_ai",
    "airy_ai_prime",
    "zeta_prime_minus1",
]

# 36-digit literals, parsed exactly into double-double at import time.
# Each is validated by an independent oracle in the test suite.
_ZETA_PRIME_MINUS1 = ExtendedReal.from_string("-0.165421143700450929213919660242780643")
_LN2 = ExtendedReal.from_string("0.693147180559945309417232121458176568")
_AI0 = ExtendedReal.from_string("0.355028053887817239260063186004183176")
_AIP0 = ExtendedReal.from_string("-0.258819403792806798405183560189203963")

_SQRT_PI = 1.7724538509055160273


@dataclass(frozen=True)
class Constants:
    """The closed-form constants entering the large-gap expansions."""

    zeta_prime_minus1: ExtendedReal
    ln2: ExtendedReal
    omega0: ExtendedReal
    dyson_const: ExtendedReal


def _build_constants() -> Constants:
    zp = _ZETA_PRIME_MINUS1
    omega0 = -(_LN2 / 6) + 3 * zp
    dyson = _LN2 / 12 + 3 * zp
    return Constants(zp, _LN2, omega0, dyson)


CONSTANTS = _build_constants()


def zeta_prime_minus1() -> ExtendedReal:
    """zeta'(-1), equal to 1/12 minus the log of the Glaisher constant."""
    return CONSTANTS.zeta_prime_minus1


# ---------------------------------------------------------------------------
# Airy Ai and Ai'
# ---------------------------------------------------------------------------

_SWITCH = 7.0
_X_MIN = -10.0
_X_MAX = 40.0


def _ai_series(x):
    """Maclaurin branch, double-double, valid for x <= 7 (array or scalar).

    Ai = c1 f - c2 g with f, g the two cubic power-series solutions of
    w'' = x w; the four running terms below are the series of f, g, f', g'.
    """
    x = np.asarray(x, dtype=float)
    x3h, x3l = dd_mul(x, np.zeros_like(x), x, np.zeros_like(x))
    x3h, x3l = dd_mul(x3h, x3l, x, np.zeros_like(x))

    one = np.ones_like(x)
    zero = np.zeros_like(x)

    fh, fl = one.copy(), zero.copy()          # f      = 1 + x^3/6 + ...
    gh, gl = x.copy(), zero.copy()            # g      = x + x^4/12 + ...
    fph, fpl = zero.copy(), zero.copy()       # f'     = x^2/2 + ...
    gph, gpl = one.copy(), zero.copy()        # g'     = 1 + x^3/3 + ...

    tfh, tfl = one.copy(), zero.copy()
    tgh, tgl = x.copy(), zero.copy()
    x2h, x2l = dd_mul(x, zero, x, zero)
    tah, tal = dd_div_f(x2h, x2l, 2.0)
    tbh, tbl = one.copy(), zero.copy()

    fph, fpl = dd_add(fph, fpl, tah, tal)

    for k in range(0, 300):
        # f term: ratio x^3 / ((3k+2)(3k+3))
        tfh, tfl = dd_mul(tfh, tfl, x3h, x3l)
        tfh, tfl = dd_div_f(tfh, tfl, (3 * k + 2.0) * (3 * k + 3.0))
        fh, fl = dd_add(fh, fl, tfh, tfl)
        # g term: ratio x^3 / ((3k+3)(3k+4))
        tgh, tgl = dd_mul(tgh, tgl, x3h, x3l)
        tgh, tgl = dd_div_f(tgh, tgl, (3 * k + 3.0) * (3 * k + 4.0))
        gh, gl = dd_add(gh, gl, tgh, tgl)
        # f' term: ratio x^3 (k+2) / ((k+1)(3k+5)(3k+6)), first term x^2/2;
        # numerator and denominator stay exact integers below 2^53
        tah, tal = dd_mul(tah, tal, x3h, x3l)
        tah, tal = dd_mul_f(tah, tal, k + 2.0)
        tah, tal = dd_div_f(tah, tal, (k + 1.0) * (3 * k + 5.0) * (3 * k + 6.0))
        fph, fpl = dd_add(fph, fpl, tah, tal)
        # g' term: ratio x^3 / ((3k+1)(3k+3))
        tbh, tbl = dd_mul(tbh, tbl, x3h, x3l)
        tbh, tbl = dd_div_f(tbh, tbl, (3 * k + 1.0) * (3 * k + 3.0))
        gph, gpl = dd_add(gph, gpl, tbh, tbl)

        if np.max(np.abs(tfh)) < 1e-40 and np.max(np.abs(tgh)) < 1e-40:
            break

    c1h, c1l = _AI0.hi, _AI0.lo
    c2h, c2l = -_AIP0.hi, -_AIP0.lo
    t1h, t1l = dd_mul(fh, fl, c1h * one, c1l * one)
    t2h, t2l = dd_mul(gh, gl, c2h * one, c2l * one)
    aih, ail = dd_add(t1h, t1l, -t2h, -t2l)
    d1h, d1l = dd_mul(fph, fpl, c1h * one, c1l * one)
    d2h, d2l = dd_mul(gph, gpl, c2h * one, c2l * one)
    aph, apl = dd_add(d1h, d1l, -d2h, -d2l)
    return aih + ail, aph + apl


def _ai_asymptotic(x):
    """Exponential branch for x > 7, binary64, optimally truncated."""
    x = np.asarray(x, dtype=float)
    zeta = (2.0 / 3.0) * x ** 1.5
    inv = 1.0 / zeta

    s_ai = np.ones_like(x)
    s_aip = np.ones_like(x)
    u = 1.0
    term = np.ones_like(x)
    prev = np.full_like(x, np.inf)
    for k in range(1, 60):
        u = u * (6 * k - 5) * (6 * k - 1) / (72.0 * k)
        v = -u * (6 * k + 1) / (6 * k - 1.0)
        term = term * (-inv)
        mag = np.abs(term) * u
        # optimal truncation: stop as soon as the terms start growing
        if np.max(mag / prev) >= 1.0:
            break
        s_ai = s_ai + term * u
        s_aip = s_aip + term * v
        prev = mag
        if np.max(mag) < 1e-20:
            break

    front = np.exp(-zeta) / (2.0 * _SQRT_PI * x ** 0.25)
    ai = front * s_ai
    aip = -np.exp(-zeta) * x ** 0.25 / (2.0 * _SQRT_PI) * s_aip
    return ai, aip


def _airy_pair(x):
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xa < _X_MIN) or np.any(xa > _X_MAX):
        raise ValueError(f"argument outside [{_X_MIN}, {_X_MAX}]")
    ai = np.empty_like(xa)
    aip = np.empty_like(xa)
    low = xa <= _SWITCH
    if np.any(low):
        a, ap = _ai_series(xa[low])
        ai[low], aip[low] = a, ap
    if np.any(~low):
        a, ap = _ai_asymptotic(xa[~low])
        ai[~low], aip[~low] = a, ap
    return ai, aip


def airy_ai(x):
    """Ai(x) for -10 <= x <= 40, scalar or ndarray, 1e-12 relative."""
    ai, _ = _airy_pair(x)
    return float(ai[0]) if np.ndim(x) == 0 else ai


def airy_ai_prime(x):
    """Ai'(x) on the same domain and accuracy as airy_ai."""
    _, aip = _airy_pair(x)
    return float(aip[0]) if np.ndim(x) == 0 else aip
