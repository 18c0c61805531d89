"""Numerical conformal geodesics on Riemannian charts."""

from .curvature import CurvatureAtPoint, christoffel, curvature_at
from .geodesic import GeodesicState, Mobius, a_to_b, b_to_a, mobius_reparam, rescale_acc
from .integrate import StepControl, Trajectory, integrate
from .metric import (ConformalFactor, MetricField, conformal_rescale, euclidean, metric_at,
                     metric_derivs, round_sphere, stereographic_factor)
from .oracle import CircleParams, eval_circle, endpoint_sigma

__version__ = "0.1.0"
