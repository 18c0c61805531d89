"""Cone-limit experiment in the flat chart.

For each slope sigma and each alpha < 2 the flat conformal geodesic with
V = e_1 and A = (alpha, sigma (2 - alpha), 0, ...) is integrated over
tau in [0, 1]. Its endpoint runs out along the ray (1, sigma) as alpha
grows, and its stereographic image approaches the north pole.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import oracle, stereographic
from .errors import OutOfRangeError
from .geodesic import GeodesicState
from .integrate import integrate
from .metric import euclidean

DEFAULT_SIGMAS = (-1.0, -0.5, 0.0, 0.5, 1.0)
DEFAULT_ALPHAS = (0.0, 0.5, 1.0, 1.5, 1.9, 1.99)


@dataclass(frozen=True)
class ConeRow:
    sigma: float
    alpha: float
    endpoint: np.ndarray
    endpoint_norm: float
    predicted_norm: float
    pole_distance: float
    endpoint_error: float
    termination: str


@dataclass
class ConeReport:
    rows: list
    dimension: int

    def header(self):
        return (["sigma", "alpha"] + [f"ep_{i + 1}" for i in range(self.dimension)]
                + ["ep_norm", "pred_norm", "pole_dist", "err"])

    def table(self):
        return [[r.sigma, r.alpha, *r.endpoint, r.endpoint_norm, r.predicted_norm,
                 r.pole_distance, r.endpoint_error] for r in self.rows]

    def to_dict(self):
        return {
            "dimension": self.dimension,
            "rows": [
                {"sigma": r.sigma, "alpha": r.alpha, "endpoint": r.endpoint.tolist(),
                 "ep_norm": r.endpoint_norm, "pred_norm": r.predicted_norm,
                 "pole_dist": r.pole_distance, "err": r.endpoint_error,
                 "termination": r.termination}
                for r in self.rows
            ],
        }

    def monotonicity_violations(self):
        """Cells where, at fixed sigma, the norm fails to grow or the pole distance fails to shrink."""
        bad = []
        for sigma in sorted({r.sigma for r in self.rows}):
            cells = sorted((r for r in self.rows if r.sigma == sigma), key=lambda r: r.alpha)
            for prev, cur in zip(cells, cells[1:]):
                if not cur.endpoint_norm > prev.endpoint_norm:
                    bad.append(f"sigma={sigma}: ep_norm not increasing at alpha={cur.alpha}")
                if not cur.pole_distance < prev.pole_distance:
                    bad.append(f"sigma={sigma}: pole_dist not decreasing at alpha={cur.alpha}")
        return bad


def cone_cell(sigma, alpha, dimension=3, ctrl=None):
    if not alpha < 2:
        raise OutOfRangeError(f"alpha must be below 2, got {alpha}")
    if abs(sigma) > 1:
        raise OutOfRangeError(f"|sigma| must be at most 1, got {sigma}")
    n = dimension
    vel = np.zeros(n)
    vel[0] = 1.0
    acc = np.zeros(n)
    acc[:2] = alpha, sigma * (2.0 - alpha)
    traj = integrate(euclidean(n), GeodesicState("A", np.zeros(n), vel, acc, 0.0), 1.0, ctrl)
    ep = np.array(traj.final.x)
    predicted = oracle.endpoint_sigma(alpha, sigma, n)
    err = float(np.linalg.norm(ep - predicted)) if traj.completed else float("nan")
    return ConeRow(
        float(sigma), float(alpha), ep, float(np.linalg.norm(ep)),
        float(oracle.endpoint_norm(alpha, sigma)),
        stereographic.chordal_distance_to_pole(ep), err, traj.termination,
    )


def _cell(args):
    return cone_cell(*args)


def cone_report(sigmas=DEFAULT_SIGMAS, alphas=DEFAULT_ALPHAS, dimension=3, ctrl=None, jobs=1):
    """Run every (sigma, alpha) cell; rows come back ordered by (sigma, alpha)."""
    for a in alphas:
        if not a < 2:
            raise OutOfRangeError(f"alpha must be below 2, got {a}")
    for s in sigmas:
        if abs(s) > 1:
            raise OutOfRangeError(f"|sigma| must be at most 1, got {s}")
    cells = [(s, a, dimension, ctrl) for s in sorted(sigmas) for a in sorted(alphas)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            rows = list(pool.map(_cell, cells))
    else:
        rows = [_cell(c) for c in cells]
    return ConeReport(rows, dimension)
