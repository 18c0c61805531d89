"""Small dense vectors, covectors and symmetric matrices in a chart.

Everything is a read-only ``numpy`` array. Vectors carry upper (contravariant)
indices, covectors lower ones; the distinction lives in the function names
rather than in wrapper classes.
"""

from functools import lru_cache

import numpy as np

from .errors import DimensionError, NotPositiveDefiniteError

MIN_DIM = 2
MAX_DIM = 8


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def check_dimension(n):
    n = int(n)
    if not MIN_DIM <= n <= MAX_DIM:
        raise DimensionError(f"chart dimension must lie in [{MIN_DIM}, {MAX_DIM}], got {n}")
    return n


def vector(components, n=None):
    """Validate and freeze a 1-D array of finite reals (a vector or covector)."""
    v = np.asarray(components, dtype=float)
    if v.ndim != 1:
        raise DimensionError(f"expected a 1-D array, got shape {v.shape}")
    if n is not None and v.shape[0] != n:
        raise DimensionError(f"expected {n} components, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise ValueError("components must be finite")
    return _frozen(v)


covector = vector


def sym_matrix(entries):
    """Symmetric matrix built from the lower triangle of ``entries``.

    The upper triangle of the input is ignored, so the result is symmetric
    bit-for-bit regardless of round-off in the caller.
    """
    m = np.asarray(entries, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    i, j = _lower_indices(m.shape[0])
    out = np.array(m, dtype=float)
    out[j, i] = m[i, j]
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def _lower_indices(n):
    return np.tril_indices(n, -1)


def _check_pair(g, *vs):
    n = g.shape[0]
    for v in vs:
        if v.shape != (n,):
            raise DimensionError(f"vector of shape {v.shape} does not match {n}x{n} matrix")


def inner(g, X, Y):
    """Metric inner product X^a g_ab Y^b (exactly symmetric in X and Y)."""
    g = np.asarray(g, dtype=float)
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    _check_pair(g, X, Y)
    return float(0.5 * (X @ g @ Y + Y @ g @ X))


def norm(g, X):
    return float(np.sqrt(inner(g, X, X)))


def lower(g, X):
    g = np.asarray(g, dtype=float)
    X = np.asarray(X, dtype=float)
    _check_pair(g, X)
    return _frozen(g @ X)


def raise_index(g_inv, omega):
    g_inv = np.asarray(g_inv, dtype=float)
    omega = np.asarray(omega, dtype=float)
    _check_pair(g_inv, omega)
    return _frozen(g_inv @ omega)


def cholesky(g):
    try:
        return np.linalg.cholesky(np.asarray(g, dtype=float))
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError("metric is not positive-definite") from exc


def inverse(g):
    """Inverse of a positive-definite matrix via its Cholesky factor.

    Raises NotPositiveDefiniteError when ``g`` is not a metric.
    """
    L = cholesky(g)
    n = L.shape[0]
    L_inv = np.linalg.solve(L, np.eye(n))
    return sym_matrix(L_inv.T @ L_inv)


def is_positive_definite(g):
    try:
        cholesky(g)
    except NotPositiveDefiniteError:
        return False
    return True
