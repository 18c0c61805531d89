import math

import numpy as np
import pytest

from conformal_geodesics import oracle
from conformal_geodesics.errors import DegenerateLineError, OutOfRangeError, PoleError

P = oracle.CircleParams


def fd_weights(offsets, order):
    """Finite-difference weights for the ``order``-th derivative on integer offsets."""
    k = np.asarray(offsets, dtype=float)
    A = np.vander(k, increasing=True).T
    b = np.zeros(len(k))
    b[order] = math.factorial(order)
    return np.linalg.solve(A, b)


def test_eval_circle_examples():
    for a, b in [(0, 1), (1.5, -2), (2, 0)]:
        np.testing.assert_array_equal(oracle.eval_circle(P(a, b, 4), 0.0), np.zeros(4))
    np.testing.assert_allclose(oracle.eval_circle(P(0, 1), 1.0), [0.8, 0.4], rtol=1e-15)
    np.testing.assert_allclose(oracle.eval_circle(P(2, 0), 0.5), [1, 0], rtol=1e-15)


def test_eval_circle_pole():
    with pytest.raises(PoleError):
        oracle.eval_circle(P(1, 0), 2.0)


def test_fixed_curve_is_tau_over_one_minus_tau():
    for tau in np.linspace(0, 0.95, 20):
        np.testing.assert_allclose(oracle.eval_circle(P(2, 0), tau)[0], tau / (1 - tau), rtol=1e-14)


def test_center_radius():
    c, r = oracle.circle_center_radius(P(0.3, 1))
    np.testing.assert_allclose(c, [0, 1])
    assert r == 1
    c, r = oracle.circle_center_radius(P(0.3, 2, 3))
    np.testing.assert_allclose(c, [0, 0.5, 0])
    assert r == 0.5
    with pytest.raises(DegenerateLineError):
        oracle.circle_center_radius(P(1, 0))


def test_line_param():
    assert oracle.line_param(0, 0.7) == 0.7
    assert oracle.line_param(2, 0.5) == 1
    assert oracle.line_param(1, 1) == 2
    with pytest.raises(PoleError):
        oracle.line_param(2, 1)
    for a in (0.5, 1, 3):
        for tau in (0.1, 0.3):
            assert oracle.eval_circle(P(a, 0), tau)[0] == pytest.approx(oracle.line_param(a, tau), rel=1e-14)


def test_limit_point():
    np.testing.assert_allclose(oracle.limit_point(P(0, 1)), [0, 2])
    np.testing.assert_allclose(oracle.limit_point(P(1, 1)), [-1, 1])
    with pytest.raises(DegenerateLineError):
        oracle.limit_point(P(1, 0))


def test_limit_approached():
    # x-error decays like 4 / (tau (alpha^2 + beta^2)); see decisions on the 1e6 threshold
    for a, b in [(0, 1), (1, 1), (-1.5, 0.5), (0.5, 2)]:
        lim = oracle.limit_point(P(a, b))
        for tau in (1e7, -1e7, 1e8, -1e8):
            assert np.linalg.norm(oracle.eval_circle(P(a, b), tau) - lim) <= 1e-6


def test_endpoint_sigma_examples():
    np.testing.assert_allclose(oracle.endpoint_sigma(0, 0), [1, 0])
    np.testing.assert_allclose(oracle.endpoint_sigma(1, 1), [1, 1])
    assert np.linalg.norm(oracle.endpoint_sigma(1.9, 1)) == pytest.approx(14.1421356, abs=1e-6)
    with pytest.raises(OutOfRangeError):
        oracle.endpoint_sigma(2, 0.5)


def test_endpoint_consistency():
    for a in np.linspace(0, 1.99, 25):
        for s in np.linspace(-1, 1, 9):
            lhs = oracle.endpoint_sigma(a, s)
            rhs = oracle.eval_circle(P(a, s * (2 - a)), 1.0)
            assert np.abs(lhs - rhs).max() <= 1e-12 * max(1.0, np.abs(rhs).max())


def test_endpoint_monotone_along_ray():
    alphas = np.linspace(0, 1.999, 200)
    for s in np.linspace(-1, 1, 9):
        pts = np.array([oracle.endpoint_sigma(a, s) for a in alphas])
        norms = np.linalg.norm(pts, axis=1)
        assert np.all(np.diff(norms) > 0)
        direction = np.array([1, s]) / math.hypot(1, s)
        np.testing.assert_allclose(pts / norms[:, None], np.tile(direction, (len(alphas), 1)), atol=1e-14)
        np.testing.assert_allclose(norms, [oracle.endpoint_norm(a, s) for a in alphas], rtol=1e-14)


def test_circle_property():
    for a, b in [(0, 1), (1, 0.5), (-0.7, 2), (1.5, -0.25)]:
        c, r = oracle.circle_center_radius(P(a, b))
        for tau in np.linspace(-20, 20, 100):
            assert abs(np.linalg.norm(oracle.eval_circle(P(a, b), tau) - c) - r) <= 1e-12 * max(1, r)


@pytest.mark.parametrize("a,b", [(0, 1), (0.5, 0.5), (1.5, 2), (1, 0), (-1, 0.3)])
def test_closed_form_satisfies_flat_equation(a, b):
    p = P(a, b)
    h = 1e-2
    offs = np.arange(-4, 5)
    w = {k: fd_weights(offs, k) for k in (1, 2, 3)}
    for tau in (0.1, 0.35, 0.6):
        pts = np.array([oracle.eval_circle(p, tau + o * h) for o in offs])
        V, A, dA = (w[k] @ pts / h ** k for k in (1, 2, 3))
        vv, va, aa = V @ V, V @ A, A @ A
        rhs = 3 * va / vv * A - 1.5 * aa / vv * V
        assert np.abs(dA - rhs).max() <= 1e-6
        ev, ea = oracle.circle_derivatives(p, tau)
        np.testing.assert_allclose(ev, V, atol=1e-9)
        np.testing.assert_allclose(ea, A, atol=1e-8)


def test_initial_conditions():
    for a, b in [(0, 1), (0.7, -0.4), (2, 0)]:
        vel, acc = oracle.circle_derivatives(P(a, b, 3), 0.0)
        np.testing.assert_allclose(vel, [1, 0, 0], atol=1e-15)
        np.testing.assert_allclose(acc, [a, b, 0], atol=1e-14)
