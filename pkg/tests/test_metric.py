import numpy as np
import pytest

from conformal_geodesics import metric as mf
from conformal_geodesics import tensors
from conformal_geodesics.errors import DomainError


def random_points(rng, n, count, radius=3.0):
    return rng.uniform(-radius, radius, size=(count, n))


def test_metric_at_examples():
    np.testing.assert_array_equal(mf.metric_at(mf.euclidean(3), [5, -1, 2]), np.eye(3))
    S = mf.round_sphere(3)
    np.testing.assert_allclose(mf.metric_at(S, [0, 0, 0]), 4 * np.eye(3), rtol=0, atol=1e-15)
    np.testing.assert_allclose(mf.metric_at(S, [1, 0, 0]), np.eye(3), rtol=0, atol=1e-15)
    np.testing.assert_allclose(mf.metric_at(S, [0.6, 0.8, 0]), np.eye(3), rtol=0, atol=1e-15)


def test_domain_guard():
    f = mf.MetricField(2, lambda x: np.eye(2), domain_guard=lambda x: x[0] > 0)
    with pytest.raises(DomainError):
        mf.metric_at(f, [-1.0, 0.0])
    with pytest.raises(DomainError):
        mf.metric_derivs(f, [1e-6, 0.0])


def test_builtin_fields_positive_definite(rng):
    for n in (2, 3, 4):
        for field in (mf.euclidean(n), mf.round_sphere(n),
                      mf.conformal_rescale(mf.euclidean(n), mf.exponential_factor(np.ones(n) * 0.3))):
            for x in random_points(rng, n, 100):
                assert tensors.is_positive_definite(mf.metric_at(field, x))


def test_derivs_euclidean_zero():
    dg, ddg = mf.metric_derivs(mf.euclidean(3), [1.0, 2.0, 3.0])
    assert not dg.any() and not ddg.any()


def test_sphere_derivs_vanish_at_origin():
    dg, _ = mf.metric_derivs(mf.round_sphere(3), np.zeros(3))
    assert np.abs(dg).max() == 0


def test_fd_matches_closed_form_at_example_point():
    S = mf.round_sphere(3)
    x = np.array([0.3, 0.0, 0.0])
    dg, ddg = mf.metric_derivs(S, x)
    fdg, fddg = mf.fd_metric_derivs(S, x, h=1e-4)
    assert np.abs(dg - fdg).max() <= 1e-6
    assert np.abs(ddg - fddg).max() <= 1e-4


def test_fd_matches_closed_form_everywhere(rng):
    fields = [mf.round_sphere(3), mf.round_sphere(4),
              mf.conformal_rescale(mf.round_sphere(3), mf.exponential_factor([0.2, -0.1, 0.4]))]
    for field in fields:
        for x in random_points(rng, field.dimension, 20, 2.0):
            dg, ddg = mf.metric_derivs(field, x)
            fdg, fddg = mf.metric_derivs(field.with_finite_differences(), x)
            assert np.abs(dg - fdg).max() <= 1e-6
            assert np.abs(ddg - fddg).max() <= 1e-4


def test_deriv_symmetries(rng):
    x = rng.normal(size=3)
    for field in (mf.round_sphere(3), mf.round_sphere(3).with_finite_differences()):
        dg, ddg = mf.metric_derivs(field, x)
        np.testing.assert_allclose(dg, dg.transpose(0, 2, 1), atol=1e-14)
        np.testing.assert_allclose(ddg, ddg.transpose(1, 0, 2, 3), atol=1e-10)
        np.testing.assert_allclose(ddg, ddg.transpose(0, 1, 3, 2), atol=1e-14)


def test_rescale_identity_and_constant(rng):
    E = mf.euclidean(3)
    one = mf.conformal_rescale(E, mf.constant_factor(1.0))
    three = mf.conformal_rescale(E, mf.constant_factor(3.0))
    for x in random_points(rng, 3, 10):
        np.testing.assert_array_equal(mf.metric_at(one, x), np.eye(3))
        np.testing.assert_allclose(mf.metric_at(three, x), 9 * np.eye(3), rtol=1e-15)
        assert not mf.constant_factor(3.0).upsilon(x).any()


def test_rescaled_euclidean_is_round_sphere(rng):
    n = 3
    R = mf.conformal_rescale(mf.euclidean(n), mf.stereographic_factor())
    S = mf.round_sphere(n)
    for x in random_points(rng, n, 20):
        assert np.abs(mf.metric_at(R, x) - mf.metric_at(S, x)).max() <= 1e-12
        dR, ddR = mf.metric_derivs(R, x)
        dS, ddS = mf.metric_derivs(S, x)
        assert np.abs(dR - dS).max() <= 1e-12
        assert np.abs(ddR - ddS).max() <= 1e-12


def test_rescale_rejects_nonpositive_factor():
    bad = mf.ConformalFactor(lambda x: -1.0)
    with pytest.raises(ValueError):
        mf.conformal_rescale(mf.euclidean(2), bad)
    with pytest.raises(ValueError):
        mf.constant_factor(0.0)


def test_upsilon_matches_fd_log_gradient(rng):
    for cf in (mf.stereographic_factor(), mf.exponential_factor([0.5, -1.0, 0.25], 0.1)):
        for x in random_points(rng, 3, 20, 2.0):
            h = 1e-5
            fd = np.array([(np.log(cf(x + h * e)) - np.log(cf(x - h * e))) / (2 * h) for e in np.eye(3)])
            assert np.abs(cf.upsilon(x) - fd).max() <= 1e-8


def test_stereographic_upsilon_example():
    np.testing.assert_allclose(mf.stereographic_factor().upsilon([1.0, 0, 0]), [-1, 0, 0], atol=1e-15)


def test_rescale_composes(rng):
    E = mf.euclidean(3)
    c1 = mf.stereographic_factor()
    c2 = mf.exponential_factor([0.3, 0.1, -0.2])
    twice = mf.conformal_rescale(mf.conformal_rescale(E, c1), c2)
    once = mf.conformal_rescale(E, c1 * c2)
    for x in random_points(rng, 3, 20):
        a, b = mf.metric_at(twice, x), mf.metric_at(once, x)
        assert np.abs(a - b).max() <= 1e-12 * np.abs(b).max()
        np.testing.assert_allclose((c1 * c2).upsilon(x), c1.upsilon(x) + c2.upsilon(x), rtol=1e-12, atol=1e-14)
        np.testing.assert_allclose(mf.metric_derivs(twice, x)[1], mf.metric_derivs(once, x)[1],
                                   rtol=1e-10, atol=1e-12)
