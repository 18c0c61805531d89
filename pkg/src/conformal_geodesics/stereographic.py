"""Stereographic chart between R^n and the unit sphere S^n in R^(n+1).

Projection is from the north pole (0, ..., 0, 1), which plays the role of the
point at infinity; the chart origin maps to the south pole.
"""

import numpy as np

from .errors import PoleError

EPS_POLE = 1e-12


def north_pole(n):
    p = np.zeros(n + 1)
    p[-1] = 1.0
    return p


def to_sphere(x):
    x = np.asarray(x, dtype=float)
    r2 = x @ x
    return np.append(2.0 * x / (1.0 + r2), (r2 - 1.0) / (r2 + 1.0))


def from_sphere(p, eps_pole=EPS_POLE):
    p = np.asarray(p, dtype=float)
    if abs(np.linalg.norm(p) - 1.0) > 1e-9:
        raise ValueError(f"point {p.tolist()} is not on the unit sphere")
    if p[-1] >= 1.0 - eps_pole:
        raise PoleError("the north pole has no image in the chart")
    head, z = p[:-1], p[-1]
    # 1 - z = |head|^2 / (1 + z) on the sphere; avoids cancellation near the pole
    den = head @ head / (1.0 + z) if z > 0 else 1.0 - z
    return head / den


def conformal_factor(x):
    x = np.asarray(x, dtype=float)
    return 2.0 / (1.0 + x @ x)


def chordal_distance_to_pole(x):
    """Straight-line distance in R^(n+1) from to_sphere(x) to the north pole."""
    x = np.asarray(x, dtype=float)
    return float(np.linalg.norm(to_sphere(x) - north_pole(len(x))))


def jacobian(x, h=1e-6):
    """Central-difference Jacobian of to_sphere, shape (n+1, n)."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    h = h * max(1.0, float(np.linalg.norm(x)))
    J = np.empty((n + 1, n))
    for k in range(n):
        e = np.zeros(n)
        e[k] = h
        J[:, k] = (to_sphere(x + e) - to_sphere(x - e)) / (2 * h)
    return J
