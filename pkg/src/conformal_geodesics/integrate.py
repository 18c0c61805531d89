"""Adaptive Dormand-Prince 5(4) integration of the conformal geodesic ODE.

The state vector is ``[x, vel, acc, s]`` where ``s`` is the metric arc length
accumulated along the run. Arc-length (C-form) runs are projected back onto
|U| = 1, C.U = 0 after every accepted step.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from . import geodesic as geo
from . import tensors
from .curvature import connection_at
from .errors import DomainError, GeometryError
from .metric import metric_at

# Dormand & Prince (1980) tableau.
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4


@dataclass(frozen=True)
class StepControl:
    atol: float = 1e-10
    rtol: float = 1e-10
    h0: float = 1e-3
    h_min: float = 1e-12
    h_max: float = None  # default: 1/32 of the parameter span
    acc_blowup: float = 1e8
    pos_blowup: float = 1e8
    param_blowup: float = 1e6
    eps_v: float = geo.EPS_V
    safety: float = 0.9


@dataclass
class Trajectory:
    samples: list
    metric_name: str
    termination: str
    arclength: np.ndarray = None
    speed: np.ndarray = None
    constraint_drift: list = field(default_factory=list)
    n_rejected: int = 0

    @property
    def formulation(self):
        return self.samples[0].formulation

    @property
    def params(self):
        return np.array([s.param for s in self.samples])

    @property
    def positions(self):
        return np.array([s.x for s in self.samples])

    @property
    def velocities(self):
        return np.array([s.vel for s in self.samples])

    @property
    def accelerations(self):
        return np.array([s.acc for s in self.samples])

    @property
    def final(self):
        return self.samples[-1]

    @property
    def completed(self):
        return self.termination == geo.COMPLETED

    def _hermite(self, knots, slopes, u):
        knots = np.asarray(knots)
        X = self.positions
        if not knots[0] - 1e-12 <= u <= knots[-1] + 1e-12:
            raise ValueError(f"{u} outside the sampled range [{knots[0]}, {knots[-1]}]")
        i = int(np.clip(np.searchsorted(knots, u) - 1, 0, len(knots) - 2))
        h = knots[i + 1] - knots[i]
        t = (u - knots[i]) / h
        h00 = 2 * t ** 3 - 3 * t ** 2 + 1
        h10 = t ** 3 - 2 * t ** 2 + t
        h01 = -2 * t ** 3 + 3 * t ** 2
        h11 = t ** 3 - t ** 2
        return h00 * X[i] + h10 * h * slopes[i] + h01 * X[i + 1] + h11 * h * slopes[i + 1]

    def position_at(self, param):
        """Cubic Hermite interpolation of the chart position at ``param``."""
        return self._hermite(self.params, self.velocities, param)

    def position_at_arclength(self, s):
        slopes = self.velocities / self.speed[:, None]
        return self._hermite(self.arclength, slopes, s)

    def distance_to(self, point):
        """Chart distance from ``point`` to the interpolated curve."""
        point = np.asarray(point, dtype=float)
        X = self.positions
        taus = self.params
        i = int(np.argmin(np.linalg.norm(X - point, axis=1)))
        best = float(np.linalg.norm(X[i] - point))
        for j in (i - 1, i):
            if 0 <= j < len(taus) - 1:
                res = minimize_scalar(
                    lambda u: np.linalg.norm(self.position_at(u) - point),
                    bounds=(taus[j], taus[j + 1]), method="bounded",
                    options={"xatol": 1e-13 * max(1.0, abs(taus[j + 1]))},
                )
                best = min(best, float(res.fun))
        return best


def _pack(state, s):
    return np.concatenate([state.x, state.vel, state.acc, [s]])


def _unpack(y, n):
    return y[:n], y[n:2 * n], y[2 * n:3 * n], y[3 * n]


def _make_rhs(field, formulation, eps_v):
    n = field.dimension
    rhs = geo.RHS[formulation]

    def f(param, y):
        x, vel, acc, _ = _unpack(y, n)
        conn = connection_at(field, x)
        st = _RawState(x, vel, acc)
        if formulation == "C":
            dx, dv, da = rhs(st, conn, tol=None)
        else:
            dx, dv, da = rhs(st, conn, eps_v=eps_v)
        return np.concatenate([dx, dv, da, [tensors.norm(conn.metric, vel)]])

    return f


class _RawState:
    # Unvalidated stand-in for GeodesicState inside Runge-Kutta stages.
    __slots__ = ("x", "vel", "acc")

    def __init__(self, x, vel, acc):
        self.x, self.vel, self.acc = x, vel, acc


def _project(field, y, n):
    x, U, C, s = _unpack(y, n)
    g = metric_at(field, x)
    drift = geo.constraint_drift(g, U, C)
    U = U / tensors.norm(g, U)
    C = C - tensors.inner(g, C, U) * U
    return np.concatenate([x, U, C, [s]]), drift


def _classify(field, y, n, param, formulation, ctrl):
    x, vel, acc, _ = _unpack(y, n)
    if not np.all(np.isfinite(y)):
        return geo.ACCELERATION_BLOWUP
    if np.linalg.norm(x) > ctrl.pos_blowup or not field.domain_guard(x):
        return geo.LEFT_DOMAIN
    g = metric_at(field, x)
    if tensors.norm(g, acc) > ctrl.acc_blowup:
        return geo.ACCELERATION_BLOWUP
    if formulation != "C":
        if abs(param) > ctrl.param_blowup or tensors.inner(g, vel, vel) <= ctrl.eps_v:
            return geo.PARAMETER_BLOWUP
    return None


def integrate(field, init, param_end, ctrl=None):
    """Integrate the conformal geodesic through ``init`` up to ``param_end``.

    Blowups, leaving the chart and step-size collapse end the run early and
    are reported in ``Trajectory.termination`` rather than raised.
    """
    ctrl = ctrl or StepControl()
    n = field.dimension
    if init.dimension != n:
        raise ValueError(f"{init.dimension}-dimensional state in a {n}-dimensional chart")
    t0, t1 = init.param, float(param_end)
    if not t1 > t0:
        raise ValueError(f"param_end {t1} must exceed the initial parameter {t0}")
    formulation = init.formulation
    init.check(metric_at(field, init.x), eps_v=ctrl.eps_v)

    f = _make_rhs(field, formulation, ctrl.eps_v)
    h_max = ctrl.h_max if ctrl.h_max is not None else (t1 - t0) / 32
    t = t0
    y = _pack(init, 0.0)
    samples, arc, speed, drifts = [init], [0.0], [tensors.norm(metric_at(field, init.x), init.vel)], []
    h = min(ctrl.h0, h_max, t1 - t0)
    k1 = f(t, y)
    rejected = 0
    termination = geo.COMPLETED
    left_domain = False

    while t < t1:
        if h < ctrl.h_min:
            termination = geo.LEFT_DOMAIN if left_domain else geo.STEP_UNDERFLOW
            break
        last = t + h >= t1
        if last:
            h = t1 - t
        try:
            k = [k1]
            for i in range(1, 7):
                yi = y + h * sum(a * kj for a, kj in zip(_A[i], k))
                k.append(f(t + _C[i] * h, yi))
            y_new = yi  # seventh stage is the 5th-order solution (FSAL)
            err_vec = h * sum(e * kj for e, kj in zip(_E, k))
            scale = ctrl.atol + ctrl.rtol * np.maximum(np.abs(y), np.abs(y_new))
            err = float(np.sqrt(np.mean((err_vec / scale) ** 2)))
            if not math.isfinite(err):
                raise FloatingPointError
        except (GeometryError, FloatingPointError, OverflowError, np.linalg.LinAlgError) as exc:
            left_domain = isinstance(exc, DomainError)
            rejected += 1
            h *= 0.25
            continue
        left_domain = False

        if err > 1.0:
            rejected += 1
            h *= max(0.2, ctrl.safety * err ** -0.2)
            continue

        t_new = t1 if last else t + h
        if formulation == "C":
            try:
                y_new, drift = _project(field, y_new, n)
            except GeometryError:
                termination = geo.LEFT_DOMAIN
                break
            drifts.append(drift)
            k1 = f(t_new, y_new)
        else:
            k1 = k[6]

        cause = _classify(field, y_new, n, t_new, formulation, ctrl)
        if cause is not None:
            termination = cause
            break
        t, y = t_new, y_new
        x, vel, acc, s = _unpack(y, n)
        samples.append(geo.GeodesicState(formulation, x, vel, acc, t))
        arc.append(s)
        speed.append(tensors.norm(metric_at(field, x), vel))
        factor = 5.0 if err == 0 else min(5.0, ctrl.safety * err ** -0.2)
        h = min(h * factor, h_max)

    return Trajectory(samples, field.name, termination, np.array(arc), np.array(speed), drifts, rejected)


def resample_by_arclength(traj, s_values):
    return np.array([traj.position_at_arclength(s) for s in s_values])
