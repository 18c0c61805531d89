"""Closed-form conformal circles in flat space.

The curve starting at the origin with velocity e_1 and acceleration
(alpha, beta, 0, ...) is

    tau -> 2 / ((2 - alpha tau)^2 + beta^2 tau^2) * ((2 - alpha tau) tau, beta tau^2, 0, ...)

a round circle through the origin when beta != 0 and the x-axis with the
projective parameter 2 tau / (2 - alpha tau) when beta = 0.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateLineError, OutOfRangeError, PoleError


@dataclass(frozen=True)
class CircleParams:
    alpha: float
    beta: float
    ambient_dim: int = 2

    def __post_init__(self):
        if not (np.isfinite(self.alpha) and np.isfinite(self.beta)):
            raise ValueError("alpha and beta must be finite")
        if self.ambient_dim < 2:
            raise ValueError("ambient dimension must be at least 2")

    @property
    def is_line(self):
        return self.beta == 0


def _pad(xy, n):
    out = np.zeros(n)
    out[:2] = xy
    return out


def eval_circle(p, tau):
    u = 2.0 - p.alpha * tau
    den = u * u + p.beta ** 2 * tau * tau
    if den == 0:
        raise PoleError(f"curve with alpha={p.alpha}, beta=0 has a pole at tau={tau}")
    return _pad(2.0 / den * np.array([u * tau, p.beta * tau * tau]), p.ambient_dim)


def circle_derivatives(p, tau):
    """Velocity and acceleration of the closed-form curve, by exact differentiation."""
    a, b = p.alpha, p.beta
    u = 2.0 - a * tau
    den = u * u + b * b * tau * tau
    # numerators and their derivatives in tau
    nx, ny = 2 * u * tau, 2 * b * tau * tau
    dnx, dny = 4 - 4 * a * tau, 4 * b * tau
    ddnx, ddny = -4 * a, 4 * b
    dden = -2 * a * u + 2 * b * b * tau
    ddden = 2 * a * a + 2 * b * b
    vel = np.array([dnx * den - nx * dden, dny * den - ny * dden]) / den ** 2
    num = np.array([nx, ny])
    dnum = np.array([dnx, dny])
    ddnum = np.array([ddnx, ddny])
    acc = (ddnum / den - 2 * dnum * dden / den ** 2
           - num * ddden / den ** 2 + 2 * num * dden ** 2 / den ** 3)
    return _pad(vel, p.ambient_dim), _pad(acc, p.ambient_dim)


def circle_center_radius(p):
    if p.is_line:
        raise DegenerateLineError("beta = 0: the trajectory is the x-axis, not a circle")
    return _pad([0.0, 1.0 / p.beta], p.ambient_dim), 1.0 / abs(p.beta)


def line_param(alpha, tau):
    den = 2.0 - alpha * tau
    if den == 0:
        raise PoleError(f"x = 2 tau / (2 - alpha tau) has a pole at tau = {tau}")
    return 2.0 * tau / den


def limit_point(p):
    """Point approached as tau -> +-infinity."""
    if p.is_line:
        raise DegenerateLineError("beta = 0: the curve has no finite limit")
    s = p.alpha ** 2 + p.beta ** 2
    return _pad(2.0 / s * np.array([-p.alpha, p.beta]), p.ambient_dim)


def endpoint_sigma(alpha, sigma, ambient_dim=2):
    """Point reached at tau = 1 by the curve with beta = sigma (2 - alpha).

    For fixed sigma it moves out along the ray (1, sigma) as alpha increases to 2.
    """
    if not alpha < 2:
        raise OutOfRangeError(f"alpha must be below 2, got {alpha}")
    return _pad(2.0 / (2.0 - alpha) / (1.0 + sigma * sigma) * np.array([1.0, sigma]), ambient_dim)


def endpoint_norm(alpha, sigma):
    if not alpha < 2:
        raise OutOfRangeError(f"alpha must be below 2, got {alpha}")
    return 2.0 / ((2.0 - alpha) * np.sqrt(1.0 + sigma * sigma))
