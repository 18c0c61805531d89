"""Levi-Civita connection, Ricci and Schouten tensors of a metric field.

Index layout: ``gamma[a, b, c] = Gamma^a_bc``. The Riemann tensor follows

    R^a_bcd = d_c Gamma^a_db - d_d Gamma^a_cb + Gamma^a_ce Gamma^e_db - Gamma^a_de Gamma^e_cb

with Ricci R_bd = R^a_bad, which makes the round sphere positively curved.
"""

from dataclasses import dataclass

import numpy as np

from . import tensors
from .errors import UnsupportedDimensionError
from .metric import metric_at, metric_derivs


@dataclass(frozen=True)
class CurvatureAtPoint:
    gamma: np.ndarray
    ricci: np.ndarray
    scalar: float
    schouten: np.ndarray
    schouten_mixed: np.ndarray
    metric: np.ndarray
    metric_inverse: np.ndarray

    def to_dict(self):
        return {
            "gamma": self.gamma.tolist(),
            "ricci": self.ricci.tolist(),
            "scalar": self.scalar,
            "schouten": self.schouten.tolist(),
            "schouten_mixed": self.schouten_mixed.tolist(),
            "metric": self.metric.tolist(),
            "metric_inverse": self.metric_inverse.tolist(),
        }


@dataclass(frozen=True)
class Connection:
    """What the geodesic right-hand sides need at one point.

    ``schouten_mixed[a, b] = P_b^a`` so that ``schouten_mixed @ V`` is P_b^a V^b.
    """

    metric: np.ndarray
    metric_inverse: np.ndarray
    gamma: np.ndarray
    schouten: np.ndarray
    schouten_mixed: np.ndarray


def _lower_gamma(dg):
    # Gamma_dbc = 1/2 (d_b g_dc + d_c g_bd - d_d g_bc)
    return 0.5 * (np.einsum("bdc->dbc", dg) + np.einsum("cbd->dbc", dg) - dg)


def christoffel(field, x):
    g = metric_at(field, x)
    dg, _ = metric_derivs(field, x)
    return np.einsum("ad,dbc->abc", tensors.inverse(g), _lower_gamma(dg))


def _riemann(g_inv, dg, ddg):
    gl = _lower_gamma(dg)
    gamma = np.einsum("ad,dbc->abc", g_inv, gl)
    # d_e g^ad = -g^ap d_e g_pq g^qd
    d_ginv = -np.einsum("ap,epq,qd->ead", g_inv, dg, g_inv)
    d_gl = 0.5 * (np.einsum("ebdc->edbc", ddg) + np.einsum("ecbd->edbc", ddg) - ddg)
    d_gamma = np.einsum("ead,dbc->eabc", d_ginv, gl) + np.einsum("ad,edbc->eabc", g_inv, d_gl)
    riem = (np.einsum("cadb->abcd", d_gamma) - np.einsum("dacb->abcd", d_gamma)
            + np.einsum("ace,edb->abcd", gamma, gamma)
            - np.einsum("ade,ecb->abcd", gamma, gamma))
    return gamma, riem


def curvature_at(field, x):
    n = field.dimension
    if n < 3:
        raise UnsupportedDimensionError(f"Schouten tensor needs n >= 3, got n = {n}")
    g = metric_at(field, x)
    g_inv = tensors.inverse(g)
    dg, ddg = metric_derivs(field, x)
    gamma, riem = _riemann(g_inv, dg, ddg)
    ricci = tensors.sym_matrix(np.einsum("abad->bd", riem))
    scalar = float(np.einsum("ab,ab->", g_inv, ricci))
    schouten = tensors.sym_matrix((ricci - scalar / (2 * (n - 1)) * g) / (n - 2))
    mixed = g_inv @ schouten
    mixed.setflags(write=False)
    gamma.setflags(write=False)
    return CurvatureAtPoint(gamma, ricci, scalar, schouten, mixed, g, g_inv)


def connection_at(field, x):
    """Connection data for the ODE; flat fields skip the curvature computation."""
    if field.flat:
        g = metric_at(field, x)
        n = field.dimension
        zero = np.zeros((n, n))
        return Connection(g, tensors.inverse(g), christoffel(field, x), zero, zero)
    c = curvature_at(field, x)
    return Connection(c.metric, c.metric_inverse, c.gamma, c.schouten, c.schouten_mixed)
