"""The connection-problem boundary value solve and its integral functionals."""

import mpmath
import numpy as np
import pytest
from scipy.integrate import quad, solve_ivp
from scipy.special import airy as scipy_airy

from gapdet.painleve2 import (
    NewtonDivergenceError,
    WrongBranchError,
    solve_hm,
    tw_integral,
    v_at,
)
from gapdet.specfun import airy_ai

mpmath.mp.dps = 30


def test_solution_metadata(hm):
    assert hm.x_left == -10.0 and hm.x_right == 8.0 and hm.h == 0.002
    assert hm.x.size == hm.u.size == hm.u_x.size == hm.v.size == 9001
    assert hm.iterations <= 12
    assert hm.residual <= 1e-8


def test_residual_recomputed_independently(hm):
    # Second-order central differences of the stored profile must satisfy
    # u'' = 2 u^3 + x u to the advertised residual level.
    u, x, h = hm.u, hm.x, hm.h
    lhs = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / h**2
    rhs = 2.0 * u[1:-1] ** 3 + x[1:-1] * u[1:-1]
    assert np.max(np.abs(lhs - rhs)) <= 1e-8


def test_right_boundary_is_airy_data(hm):
    assert hm.u_at(8.0) - airy_ai(8.0) == 0.0
    assert abs(hm.u_at(6.0) / airy_ai(6.0) - 1.0) <= 1e-5
    assert abs(hm.u_at(4.5) / airy_ai(4.5) - 1.0) <= 1e-3


def test_left_asymptote(hm):
    # u ~ sqrt(-x/2) deep on the left; at x = -8 the correction is < 1e-2.
    assert abs(hm.u_at(-8.0) - 2.0) <= 1e-2
    assert abs(hm.u_at(-10.0) - np.sqrt(5.0)) <= 1e-2


def test_profile_positive_and_decreasing_on_the_right(hm):
    assert np.min(hm.u) > 0.0
    xs = np.linspace(0.0, 8.0, 200)
    vals = np.array([hm.u_at(t) for t in xs])
    assert np.all(np.diff(vals) < 0.0)


def test_value_at_zero_against_shooting_oracle(hm):
    # Integrate the same ODE down from Airy data at the right edge with an
    # unrelated adaptive integrator.
    ai8, aip8, _, _ = scipy_airy(8.0)
    res = solve_ivp(
        lambda x, y: [y[1], 2.0 * y[0] ** 3 + x * y[0]],
        (8.0, 0.0),
        [ai8, aip8],
        rtol=1e-11,
        atol=1e-14,
    )
    assert abs(hm.u_at(0.0) - res.y[0, -1]) <= 1e-6
    # regression pin for the value the oracle above confirms
    assert abs(hm.u_at(0.0) - 0.36706153575002176) <= 1e-9


def test_step_refinement_is_second_order():
    u0 = [solve_hm(h=h).u_at(0.0) for h in (0.008, 0.004, 0.002)]
    ratio = (u0[0] - u0[1]) / (u0[1] - u0[2])
    assert 3.8 <= ratio <= 4.2


def test_accessors_return_python_floats(hm):
    assert type(hm.u_at(1.0)) is float
    assert type(hm.u_x_at(1.0)) is float
    assert type(v_at(hm, 1.0)) is float
    assert type(tw_integral(hm, 1.0)) is float


def test_derivative_accessor_matches_finite_difference(hm):
    for x in (-3.0, 0.0, 2.5):
        fd = (hm.u_at(x + 1e-5) - hm.u_at(x - 1e-5)) / 2e-5
        assert abs(hm.u_x_at(x) - fd) <= 1e-7


def test_v_is_the_squared_tail_mass(hm):
    body, _ = quad(lambda y: hm.u_at(y) ** 2, 0.0, 8.0, limit=200, epsabs=1e-12)
    tail = float(mpmath.quad(lambda y: mpmath.airyai(y) ** 2, [8, mpmath.inf]))
    assert abs(v_at(hm, 0.0) - (body + tail)) <= 1e-6
    # difference form avoids the tail entirely
    mid, _ = quad(lambda y: hm.u_at(y) ** 2, -2.0, 6.0, limit=200, epsabs=1e-12)
    assert abs((v_at(hm, -2.0) - v_at(hm, 6.0)) - mid) <= 1e-7


def test_moment_functional_against_quadrature_oracle(hm):
    body, _ = quad(lambda y: y * hm.u_at(y) ** 2, 0.0, 8.0, limit=200, epsabs=1e-13)
    tail = float(mpmath.quad(lambda y: y * mpmath.airyai(y) ** 2, [8, mpmath.inf]))
    assert abs(tw_integral(hm, 0.0) - (body + tail)) <= 1e-8
    assert abs(tw_integral(hm, 0.0) - 0.03110597881799387) <= 1e-9


def test_moment_functional_shape(hm):
    xs = np.linspace(-8.0, 7.0, 31)
    vals = np.array([tw_integral(hm, t) for t in xs])
    assert np.all(vals > 0.0)
    assert np.all(np.diff(vals) < 0.0)
    assert tw_integral(hm, 6.0) <= 1e-6


def test_moment_derivative_is_minus_v(hm):
    h = 1e-4
    fd = (tw_integral(hm, h) - tw_integral(hm, -h)) / (2 * h)
    assert abs(fd + v_at(hm, 0.0)) <= 1e-6


def test_window_and_step_validation():
    with pytest.raises(ValueError):
        solve_hm(x_left=-7.0)
    with pytest.raises(ValueError):
        solve_hm(h=0.1)
    with pytest.raises(ValueError):
        solve_hm(h=-0.002)


def test_evaluation_outside_window_rejected(hm):
    for bad in (-10.001, 8.001):
        with pytest.raises(ValueError):
            hm.u_at(bad)
    with pytest.raises(ValueError):
        tw_integral(hm, -9.001)
    with pytest.raises(ValueError):
        tw_integral(hm, 7.001)
    # the inclusive edges still work
    tw_integral(hm, -9.0)
    tw_integral(hm, 7.0)


def test_negated_start_is_detected_as_wrong_branch(hm):
    with pytest.raises(WrongBranchError):
        solve_hm(_u0=-hm.u)


def test_hopeless_start_raises_divergence(hm):
    with pytest.raises(NewtonDivergenceError):
        solve_hm(_u0=np.full(hm.x.size, 1e30))
