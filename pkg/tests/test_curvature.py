import numpy as np
import pytest
import sympy as sp

from conformal_geodesics import curvature as cv
from conformal_geodesics import metric as mf
from conformal_geodesics.errors import UnsupportedDimensionError


def compatibility_christoffel(field, x):
    """Gamma from nabla g = 0 solved as a linear system, metric derivatives by finite differences."""
    n = field.dimension
    g = mf.metric_at(field, x)
    dg, _ = mf.fd_metric_derivs(field, x, h=1e-5)
    pairs = [(b, c) for b in range(n) for c in range(b, n)]
    col = {(a, b, c): k for k, (a, (b, c)) in enumerate((a, p) for a in range(n) for p in pairs)}

    def idx(a, b, c):
        return col[(a, min(b, c), max(b, c))]

    rows, rhs = [], []
    for c in range(n):
        for a in range(n):
            for b in range(n):
                # d_c g_ab = Gamma^d_ca g_db + Gamma^d_cb g_ad
                row = np.zeros(len(col))
                for d in range(n):
                    row[idx(d, c, a)] += g[d, b]
                    row[idx(d, c, b)] += g[a, d]
                rows.append(row)
                rhs.append(dg[c, a, b])
    sol = np.linalg.lstsq(np.array(rows), np.array(rhs), rcond=None)[0]
    out = np.empty((n, n, n))
    for a in range(n):
        for b in range(n):
            for c in range(n):
                out[a, b, c] = sol[idx(a, b, c)]
    return out


def symbolic_sphere(n, point):
    """Ricci scalar and Schouten tensor of 4/(1+|x|^2)^2 delta by exact symbolic differentiation."""
    xs = sp.symbols(f"x0:{n}")
    g = sp.eye(n) * 4 / (1 + sum(v ** 2 for v in xs)) ** 2
    gi = g.inv()
    Gam = [[[sum(gi[a, d] * (sp.diff(g[d, c], xs[b]) + sp.diff(g[b, d], xs[c]) - sp.diff(g[b, c], xs[d]))
                 for d in range(n)) / 2 for c in range(n)] for b in range(n)] for a in range(n)]
    subs = dict(zip(xs, point))

    def riem(a, b, c, d):
        e = sp.diff(Gam[a][d][b], xs[c]) - sp.diff(Gam[a][c][b], xs[d])
        e += sum(Gam[a][c][k] * Gam[k][d][b] - Gam[a][d][k] * Gam[k][c][b] for k in range(n))
        return e

    ric = sp.Matrix(n, n, lambda b, d: sum(riem(a, b, a, d) for a in range(n)).subs(subs))
    gval = g.subs(subs)
    R = sum(gval.inv()[a, b] * ric[a, b] for a in range(n) for b in range(n))
    P = (ric - R / (2 * (n - 1)) * gval) / (n - 2)
    return float(R), np.array(P.evalf(), dtype=float)


def test_christoffel_flat_zero():
    assert not cv.christoffel(mf.euclidean(3), [1, 2, 3]).any()
    assert not cv.christoffel(mf.euclidean(2), [1, 2]).any()


def test_christoffel_sphere_origin_zero():
    assert np.abs(cv.christoffel(mf.round_sphere(3), np.zeros(3))).max() == 0


def test_christoffel_matches_compatibility_oracle(rng):
    S = mf.round_sphere(3)
    points = [np.array([0.5, 0.0, 0.0])] + list(rng.uniform(-2, 2, size=(5, 3)))
    for x in points:
        gam = cv.christoffel(S, x)
        np.testing.assert_allclose(gam, gam.transpose(0, 2, 1), atol=1e-15)
        assert np.abs(gam - compatibility_christoffel(S, x)).max() <= 1e-5


def test_flat_curvature(rng):
    E = mf.euclidean(3)
    for x in rng.uniform(-5, 5, size=(50, 3)):
        c = cv.curvature_at(E, x)
        assert np.abs(c.ricci).max() <= 1e-9
        assert abs(c.scalar) <= 1e-9
        assert np.abs(c.schouten).max() <= 1e-9


def test_sphere_examples():
    S = mf.round_sphere(3)
    c0 = cv.curvature_at(S, np.zeros(3))
    assert abs(c0.scalar - 6) <= 1e-12
    np.testing.assert_allclose(c0.schouten, 2 * np.eye(3), atol=1e-12)
    c1 = cv.curvature_at(S, np.array([1.0, 0, 0]))
    np.testing.assert_allclose(c1.schouten, 0.5 * np.eye(3), atol=1e-12)


@pytest.mark.parametrize("point", [(0, 0, 0), (1, 0, 0), (0.5, -0.25, 0.75)])
def test_sphere_against_symbolic(point):
    R, P = symbolic_sphere(3, point)
    c = cv.curvature_at(mf.round_sphere(3), np.array(point, dtype=float))
    assert abs(c.scalar - R) <= 1e-10
    np.testing.assert_allclose(c.schouten, P, atol=1e-12)


def test_sphere_identity_finite_differences(rng):
    S = mf.round_sphere(3).with_finite_differences()
    for _ in range(50):
        x = rng.normal(size=3)
        x *= rng.uniform(0, 3) / np.linalg.norm(x)
        c = cv.curvature_at(S, x)
        assert np.abs(c.schouten - 0.5 * mf.metric_at(S, x)).max() <= 1e-4
        assert c.scalar > 0


def test_scalar_is_trace_of_ricci(rng):
    S = mf.conformal_rescale(mf.round_sphere(4), mf.exponential_factor([0.1, 0.2, -0.3, 0.05]))
    for x in rng.uniform(-1, 1, size=(10, 4)):
        c = cv.curvature_at(S, x)
        independent = sum(c.metric_inverse[a, b] * c.ricci[a, b] for a in range(4) for b in range(4))
        assert abs(c.scalar - independent) <= 1e-10 * max(1.0, abs(independent))
        np.testing.assert_allclose(c.schouten_mixed, c.metric_inverse @ c.schouten, rtol=1e-14, atol=1e-14)


def test_sphere_scalar_in_higher_dimension():
    for n in (3, 4, 5):
        c = cv.curvature_at(mf.round_sphere(n), np.full(n, 0.3))
        assert abs(c.scalar - n * (n - 1)) <= 1e-10


def test_n2_rejected():
    with pytest.raises(UnsupportedDimensionError):
        cv.curvature_at(mf.euclidean(2), [0.0, 0.0])
