"""Riemannian metrics on a chart, evaluated pointwise with their derivatives.

Derivative arrays use the layout ``dg[k, i, j] = d_k g_ij`` and
``ddg[k, l, i, j] = d_k d_l g_ij``.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import tensors
from .errors import DimensionError, DomainError

DEFAULT_FD_STEP = 1e-4


def _always(x):
    return True


@dataclass(frozen=True)
class ConformalFactor:
    """A positive function Omega with (optionally) closed-form derivatives.

    ``grad`` and ``hess`` return the first and second derivatives of Omega
    itself. When they are missing, finite differences are used.
    """

    omega: Callable[[np.ndarray], float]
    grad: Optional[Callable[[np.ndarray], np.ndarray]] = None
    hess: Optional[Callable[[np.ndarray], np.ndarray]] = None
    name: str = "omega"
    fd_step: float = DEFAULT_FD_STEP

    def __call__(self, x):
        return float(self.omega(np.asarray(x, dtype=float)))

    def gradient(self, x):
        x = np.asarray(x, dtype=float)
        if self.grad is not None:
            return np.asarray(self.grad(x), dtype=float)
        return _fd_gradient(self.omega, x, self.fd_step)

    def hessian(self, x):
        x = np.asarray(x, dtype=float)
        if self.hess is not None:
            return np.asarray(self.hess(x), dtype=float)
        return _fd_hessian(self.omega, x, self.fd_step)

    def upsilon(self, x):
        """Upsilon_a = d_a log Omega, as a covector."""
        return tensors.covector(self.gradient(x) / self(x))

    @property
    def closed_form(self):
        return self.grad is not None and self.hess is not None

    def __mul__(self, other):
        if not isinstance(other, ConformalFactor):
            return NotImplemented
        a, b = self, other
        grad = hess = None
        if a.closed_form and b.closed_form:
            def grad(x):
                return a(x) * b.gradient(x) + b(x) * a.gradient(x)

            def hess(x):
                ga, gb = a.gradient(x), b.gradient(x)
                return (a(x) * b.hessian(x) + b(x) * a.hessian(x)
                        + np.outer(ga, gb) + np.outer(gb, ga))
        return ConformalFactor(lambda x: a(x) * b(x), grad, hess,
                               name=f"{a.name}*{b.name}", fd_step=min(a.fd_step, b.fd_step))


def constant_factor(value):
    value = float(value)
    if not value > 0:
        raise ValueError(f"conformal factor must be positive, got {value}")
    return ConformalFactor(
        lambda x: value,
        lambda x: np.zeros(len(x)),
        lambda x: np.zeros((len(x), len(x))),
        name=f"constant({value!r})",
    )


def stereographic_factor():
    """Omega(x) = 2 / (1 + |x|^2), pulling the unit round metric back to the chart."""

    def omega(x):
        return 2.0 / (1.0 + x @ x)

    def grad(x):
        return -omega(x) ** 2 * x

    def hess(x):
        w = omega(x)
        return 2.0 * w ** 3 * np.outer(x, x) - w ** 2 * np.eye(len(x))

    return ConformalFactor(omega, grad, hess, name="stereographic")


def exponential_factor(coeffs, offset=0.0):
    """Omega(x) = exp(k . x + c)."""
    k = np.asarray(coeffs, dtype=float)
    c = float(offset)

    def omega(x):
        return float(np.exp(k @ x + c))

    return ConformalFactor(
        omega,
        lambda x: omega(x) * k,
        lambda x: omega(x) * np.outer(k, k),
        name="exponential",
    )


@dataclass(frozen=True)
class MetricField:
    """A metric on a chart: point -> g_ij, plus optional closed-form derivatives.

    ``derivs`` returns ``(dg, ddg)``. When it is ``None`` or ``deriv_mode`` is
    ``"finite_difference"``, central differences with step
    ``fd_step * max(1, |x|)`` are used instead.
    """

    dimension: int
    evaluator: Callable[[np.ndarray], np.ndarray]
    name: str = "metric"
    derivs: Optional[Callable[[np.ndarray], tuple]] = None
    deriv_mode: str = "closed_form"
    fd_step: float = DEFAULT_FD_STEP
    domain_guard: Callable[[np.ndarray], bool] = _always
    flat: bool = False
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "dimension", tensors.check_dimension(self.dimension))
        if self.deriv_mode not in ("closed_form", "finite_difference"):
            raise ValueError(f"unknown deriv_mode {self.deriv_mode!r}")

    def with_finite_differences(self, step=DEFAULT_FD_STEP):
        return MetricField(self.dimension, self.evaluator, self.name, self.derivs,
                           "finite_difference", step, self.domain_guard, self.flat, self.params)

    @property
    def uses_closed_form(self):
        return self.deriv_mode == "closed_form" and self.derivs is not None


def _point(field, x):
    x = np.asarray(x, dtype=float)
    if x.shape != (field.dimension,):
        raise DimensionError(f"point of shape {x.shape} in a {field.dimension}-dimensional chart")
    return x


def metric_at(field, x):
    x = _point(field, x)
    if not np.all(np.isfinite(x)) or not field.domain_guard(x):
        raise DomainError(f"point {x.tolist()} is outside the domain of {field.name}")
    return tensors.sym_matrix(field.evaluator(x))


def _step(field, x):
    return field.fd_step * max(1.0, float(np.linalg.norm(x)))


def _fd_gradient(f, x, h):
    n = len(x)
    out = None
    for k in range(n):
        e = np.zeros(n)
        e[k] = h
        d = (np.asarray(f(x + e)) - np.asarray(f(x - e))) / (2 * h)
        if out is None:
            out = np.empty((n,) + np.shape(d))
        out[k] = d
    return out


def _fd_hessian(f, x, h):
    n = len(x)
    f0 = np.asarray(f(x), dtype=float)
    out = np.empty((n, n) + f0.shape)
    eye = np.eye(n) * h
    for k in range(n):
        out[k, k] = (np.asarray(f(x + eye[k])) - 2 * f0 + np.asarray(f(x - eye[k]))) / h ** 2
        for l in range(k):
            d = (np.asarray(f(x + eye[k] + eye[l])) - np.asarray(f(x + eye[k] - eye[l]))
                 - np.asarray(f(x - eye[k] + eye[l])) + np.asarray(f(x - eye[k] - eye[l]))) / (4 * h ** 2)
            out[k, l] = out[l, k] = d
    return out


def fd_metric_derivs(field, x, h=None):
    """Central-difference first and second derivatives of the metric."""
    x = _point(field, x)
    h = _step(field, x) if h is None else h

    def g(y):
        return metric_at(field, y)

    return _fd_gradient(g, x, h), _fd_hessian(g, x, h)


def metric_derivs(field, x):
    x = _point(field, x)
    if field.uses_closed_form:
        metric_at(field, x)
        dg, ddg = field.derivs(x)
        return np.asarray(dg, dtype=float), np.asarray(ddg, dtype=float)
    try:
        return fd_metric_derivs(field, x)
    except DomainError as exc:
        raise DomainError(f"finite-difference stencil around {x.tolist()} leaves the domain") from exc


def euclidean(n):
    n = tensors.check_dimension(n)
    eye = np.eye(n)

    def derivs(x):
        return np.zeros((n, n, n)), np.zeros((n, n, n, n))

    return MetricField(n, lambda x: eye, "euclidean", derivs, flat=True)


def round_sphere(n):
    """Unit round sphere pulled back by inverse stereographic projection.

    g_ij = 4 / (1 + |x|^2)^2 delta_ij on all of R^n (the sphere minus its north pole).
    """
    n = tensors.check_dimension(n)
    eye = np.eye(n)

    def evaluator(x):
        return 4.0 / (1.0 + x @ x) ** 2 * eye

    def derivs(x):
        q = 1.0 + x @ x
        # f = 4 q^-2;  d_k f = -16 x_k q^-3;  d_k d_l f = 96 x_k x_l q^-4 - 16 delta_kl q^-3
        df = -16.0 * x / q ** 3
        ddf = 96.0 * np.outer(x, x) / q ** 4 - 16.0 * eye / q ** 3
        return (np.einsum("k,ij->kij", df, eye),
                np.einsum("kl,ij->klij", ddf, eye))

    return MetricField(n, evaluator, "round_sphere", derivs)


def conformal_rescale(field, cf):
    """The metric Omega^2 g, with closed-form derivatives when both inputs have them."""
    origin = np.zeros(field.dimension)
    if field.domain_guard(origin) and not cf(origin) > 0:
        raise ValueError(f"conformal factor must be positive, got {cf(origin)} at the origin")

    def evaluator(x):
        w = cf(x)
        if not w > 0:
            raise ValueError(f"conformal factor must be positive, got {w} at {x.tolist()}")
        return w * w * metric_at(field, x)

    derivs = None
    if field.uses_closed_form and cf.closed_form:
        def derivs(x):
            w, dw, ddw = cf(x), cf.gradient(x), cf.hessian(x)
            g0 = metric_at(field, x)
            dg0, ddg0 = field.derivs(x)
            dg = 2 * w * np.einsum("k,ij->kij", dw, g0) + w * w * dg0
            ddg = (2 * np.einsum("kl,ij->klij", np.outer(dw, dw) + w * ddw, g0)
                   + 2 * w * np.einsum("k,lij->klij", dw, dg0)
                   + 2 * w * np.einsum("l,kij->klij", dw, dg0)
                   + w * w * ddg0)
            return dg, ddg

    return MetricField(
        field.dimension, evaluator, f"{field.name}|{cf.name}", derivs,
        field.deriv_mode, field.fd_step, field.domain_guard, False,
        {"base": field, "factor": cf},
    )
