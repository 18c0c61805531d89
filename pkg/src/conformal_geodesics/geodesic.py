"""Conformal geodesic equations in chart coordinates.

Three equivalent formulations are supported:

* ``"A"``: projective parameter tau, state (x, V, A) with A = nabla_V V.
* ``"B"``: projective parameter tau, state (x, V, B) with
  B = A / |V|^2 - 2 (V.A) / |V|^4 V.
* ``"C"``: arc length t, state (x, U, C) with |U| = 1 and C orthogonal to U.

The covariant derivative along the curve is expanded into the coordinate
derivative plus Christoffel terms, so every right-hand side returns plain
coordinate derivatives ``(dx, dvel, dacc)``.
"""

from dataclasses import dataclass, replace

import numpy as np

from . import tensors
from .curvature import connection_at
from .errors import ConstraintDriftError, DegenerateVelocityError, PoleError
from .metric import metric_at

FORMULATIONS = ("A", "B", "C")
EPS_V = 1e-10
CONSTRAINT_TOL = 1e-6

COMPLETED = "completed"
ACCELERATION_BLOWUP = "acceleration_blowup"
PARAMETER_BLOWUP = "parameter_blowup"
LEFT_DOMAIN = "left_domain"
STEP_UNDERFLOW = "step_underflow"


@dataclass(frozen=True)
class GeodesicState:
    formulation: str
    x: np.ndarray
    vel: np.ndarray
    acc: np.ndarray
    param: float = 0.0

    def __post_init__(self):
        if self.formulation not in FORMULATIONS:
            raise ValueError(f"formulation must be one of {FORMULATIONS}, got {self.formulation!r}")
        n = len(self.x)
        object.__setattr__(self, "x", tensors.vector(self.x))
        object.__setattr__(self, "vel", tensors.vector(self.vel, n))
        object.__setattr__(self, "acc", tensors.vector(self.acc, n))
        object.__setattr__(self, "param", float(self.param))

    @property
    def dimension(self):
        return len(self.x)

    def check(self, g, tol=CONSTRAINT_TOL, eps_v=EPS_V):
        """Raise if the state violates its formulation's invariants under ``g``."""
        vv = tensors.inner(g, self.vel, self.vel)
        if self.formulation == "C":
            drift = constraint_drift(g, self.vel, self.acc)
            if drift > tol:
                raise ConstraintDriftError(f"arc-length constraints violated by {drift:.3e}")
        elif vv <= eps_v:
            raise DegenerateVelocityError(f"V.V = {vv:.3e} is not positive")
        return self


def constraint_drift(g, U, C):
    return max(abs(tensors.norm(g, U) - 1.0), abs(tensors.inner(g, C, U)))


@dataclass(frozen=True)
class Mobius:
    """tau -> (a tau + b) / (c tau + d)."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if self.det == 0:
            raise ValueError("Mobius map needs ad - bc != 0")

    @classmethod
    def identity(cls):
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def reversal(cls):
        """tau -> 1 - tau."""
        return cls(-1.0, 1.0, 0.0, 1.0)

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    def _den(self, tau):
        den = self.c * tau + self.d
        if den == 0:
            raise PoleError(f"Mobius map has a pole at tau = {tau}")
        return den

    def __call__(self, tau):
        return (self.a * tau + self.b) / self._den(tau)

    def derivative(self, tau):
        return self.det / self._den(tau) ** 2

    def second_derivative(self, tau):
        return -2.0 * self.c * self.det / self._den(tau) ** 3

    def inverse(self):
        return Mobius(self.d, -self.b, -self.c, self.a)


def _gamma_contract(gamma, X, Y):
    return np.einsum("abc,b,c->a", gamma, X, Y)


def rhs_A(state, curv, eps_v=EPS_V):
    V, A = state.vel, state.acc
    g, gamma = curv.metric, curv.gamma
    vv = tensors.inner(g, V, V)
    if vv <= eps_v:
        raise DegenerateVelocityError(f"V.V = {vv:.3e}")
    va = tensors.inner(g, V, A)
    aa = tensors.inner(g, A, A)
    pvv = tensors.inner(curv.schouten, V, V)
    dA_cov = 3 * va / vv * A - 1.5 * aa / vv * V + vv * (curv.schouten_mixed @ V) - 2 * pvv * V
    return V.copy(), A - _gamma_contract(gamma, V, V), dA_cov - _gamma_contract(gamma, V, A)


def b_to_a(V, B, g):
    vv = tensors.inner(g, V, V)
    return vv * np.asarray(B) - 2 * tensors.inner(g, V, B) * np.asarray(V)


def a_to_b(V, A, g, eps_v=EPS_V):
    vv = tensors.inner(g, V, V)
    if vv <= eps_v:
        raise DegenerateVelocityError(f"V.V = {vv:.3e}")
    return tensors.vector(np.asarray(A) / vv - 2 * tensors.inner(g, V, A) / vv ** 2 * np.asarray(V))


def a_to_c(V, A, g, eps_v=EPS_V):
    """Unit velocity and arc-length acceleration of the curve carrying (V, A)."""
    vv = tensors.inner(g, V, V)
    if vv <= eps_v:
        raise DegenerateVelocityError(f"V.V = {vv:.3e}")
    U = np.asarray(V) / np.sqrt(vv)
    C = np.asarray(A) / vv - tensors.inner(g, V, A) / vv ** 2 * np.asarray(V)
    return tensors.vector(U), tensors.vector(C)


def rhs_B(state, curv, eps_v=EPS_V):
    V, B = state.vel, state.acc
    g, gamma = curv.metric, curv.gamma
    vv = tensors.inner(g, V, V)
    if vv <= eps_v:
        raise DegenerateVelocityError(f"V.V = {vv:.3e}")
    vb = tensors.inner(g, V, B)
    bb = tensors.inner(g, B, B)
    A = vv * B - 2 * vb * V
    dB_cov = vb * B - 0.5 * bb * V + curv.schouten_mixed @ V
    return V.copy(), A - _gamma_contract(gamma, V, V), dB_cov - _gamma_contract(gamma, V, B)


def rhs_C(state, curv, tol=CONSTRAINT_TOL):
    U, C = state.vel, state.acc
    g, gamma = curv.metric, curv.gamma
    if tol is not None:
        drift = constraint_drift(g, U, C)
        if drift > tol:
            raise ConstraintDriftError(f"arc-length constraints violated by {drift:.3e}")
    cc = tensors.inner(g, C, C)
    puu = tensors.inner(curv.schouten, U, U)
    dC_cov = curv.schouten_mixed @ U - (cc + puu) * U
    return U.copy(), C - _gamma_contract(gamma, U, U), dC_cov - _gamma_contract(gamma, U, C)


RHS = {"A": rhs_A, "B": rhs_B, "C": rhs_C}


def rescale_acc(kind, vel, acc, upsilon, g):
    """Acceleration seen by Omega^2 g, with Upsilon = d log Omega.

    All raising and lowering uses the unhatted ``g``. For kinds B and C the
    result is the hatted covector raised with ``g``; divide by Omega^2 to get
    the vector that is raised with the rescaled metric (see ``rescale_state``).
    """
    vel = np.asarray(vel, dtype=float)
    acc = np.asarray(acc, dtype=float)
    ups = np.asarray(upsilon, dtype=float)
    ups_up = tensors.raise_index(tensors.inverse(g), ups)
    v_ups = float(vel @ ups)
    if kind == "A":
        out = acc - tensors.inner(g, vel, vel) * ups_up + 2 * v_ups * vel
    elif kind == "B":
        out = acc - ups_up
    elif kind == "C":
        out = acc - ups_up + v_ups * vel
    else:
        raise ValueError(f"kind must be A, B or C, got {kind!r}")
    return tensors.vector(out)


def rescale_state(state, field, cf):
    """Initial data for ``conformal_rescale(field, cf)`` describing the same curve.

    The A- and B-form states keep tau and V; the C-form state is re-normalised
    to unit speed under the rescaled metric.
    """
    g = metric_at(field, state.x)
    w = cf(state.x)
    ups = cf.upsilon(state.x)
    acc = rescale_acc(state.formulation, state.vel, state.acc, ups, g)
    if state.formulation == "A":
        return replace(state, acc=acc)
    if state.formulation == "B":
        return replace(state, acc=acc / w ** 2)
    return replace(state, vel=state.vel / w, acc=acc / w ** 2)


def convert(state, formulation, g):
    """Re-express A-form data in another formulation at the same point."""
    if state.formulation == formulation:
        return state
    if state.formulation != "A":
        if state.formulation == "B" and formulation == "A":
            return replace(state, formulation="A", acc=b_to_a(state.vel, state.acc, g))
        raise ValueError(f"cannot convert {state.formulation}-form to {formulation}-form")
    if formulation == "B":
        return replace(state, formulation="B", acc=a_to_b(state.vel, state.acc, g))
    U, C = a_to_c(state.vel, state.acc, g)
    return GeodesicState("C", state.x, U, C, 0.0)


def mobius_reparam(init, m, g, eps_v=EPS_V):
    """A-form data for the same curve with new parameter m(tau).

    With s = m^-1 the old parameter as a function of the new one,
    V' = s' V and A' = s'^2 A + s'' V at the starting point.
    """
    if init.formulation != "A":
        raise ValueError("mobius_reparam expects A-form data")
    tau = init.param
    new_tau = m(tau)
    m1 = m.derivative(tau)
    m2 = m.second_derivative(tau)
    s1 = 1.0 / m1
    s2 = -m2 / m1 ** 3
    V = s1 * init.vel
    A = s1 * s1 * init.acc + s2 * init.vel
    out = GeodesicState("A", init.x, V, A, new_tau)
    vv = tensors.inner(g, out.vel, out.vel)
    if vv <= eps_v:
        raise DegenerateVelocityError(f"reparameterised V.V = {vv:.3e}")
    return out
