"""JSON experiment configuration.

Top-level keys are ``metric``, ``initial``, ``range``, ``control`` and
``output``; unknown keys anywhere are rejected. Example::

    {
      "metric": {"metric": "rescaled", "dimension": 3, "base": "euclidean",
                 "omega": {"kind": "stereographic"}},
      "initial": {"formulation": "A", "x": [0, 0, 0], "vel": [1, 0, 0],
                  "acc": [0, 1, 0], "param": 0.0},
      "range": {"param_end": 1.0},
      "control": {"atol": 1e-10, "rtol": 1e-10},
      "output": {"format": "csv", "path": "traj.csv"}
    }
"""

import json
import os
from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from . import metric as mf
from .geodesic import GeodesicState, Mobius
from .integrate import StepControl


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class OmegaSpec(_Strict):
    kind: Literal["stereographic", "constant", "exponential"]
    value: float = Field(1.0, gt=0)
    coeffs: Optional[List[float]] = None
    offset: float = 0.0

    @model_validator(mode="after")
    def _coeffs_for_exponential(self):
        if self.kind == "exponential" and self.coeffs is None:
            raise ValueError("exponential omega needs 'coeffs'")
        return self


class MetricSpec(_Strict):
    metric: Literal["euclidean", "round_sphere", "rescaled"]
    dimension: int = Field(ge=2, le=8)
    omega: Optional[OmegaSpec] = None
    base: Literal["euclidean", "round_sphere"] = "euclidean"
    deriv_mode: Literal["closed_form", "finite_difference"] = "closed_form"
    fd_step: float = Field(mf.DEFAULT_FD_STEP, gt=0)

    @model_validator(mode="after")
    def _rescaled_needs_omega(self):
        if self.metric == "rescaled" and self.omega is None:
            raise ValueError("metric 'rescaled' needs an 'omega' object")
        if self.omega is not None and self.omega.coeffs is not None \
                and len(self.omega.coeffs) != self.dimension:
            raise ValueError("omega.coeffs must have one entry per dimension")
        return self


class InitialSpec(_Strict):
    formulation: Literal["A", "B", "C"] = "A"
    x: List[float]
    vel: Optional[List[float]] = None
    acc: Optional[List[float]] = None
    param: float = 0.0
    mobius: Optional[List[float]] = Field(None, min_length=4, max_length=4)


class RangeSpec(_Strict):
    param_end: float = 1.0


class ControlSpec(_Strict):
    atol: Optional[float] = Field(None, gt=0)
    rtol: Optional[float] = Field(None, gt=0)
    h0: float = Field(1e-3, gt=0)
    h_min: float = Field(1e-12, gt=0)
    h_max: Optional[float] = Field(None, gt=0)
    acc_blowup: float = Field(1e8, gt=0)
    pos_blowup: float = Field(1e8, gt=0)
    param_blowup: float = Field(1e6, gt=0)
    tolerance: float = Field(1e-5, gt=0)


class OutputSpec(_Strict):
    format: Literal["csv", "json"] = "json"
    path: Optional[str] = None


class ExperimentConfig(_Strict):
    metric: Optional[MetricSpec] = None
    initial: Optional[InitialSpec] = None
    range: RangeSpec = RangeSpec()
    control: ControlSpec = ControlSpec()
    output: OutputSpec = OutputSpec()

    @model_validator(mode="after")
    def _dimensions_agree(self):
        if self.metric is not None and self.initial is not None:
            n = self.metric.dimension
            for key in ("x", "vel", "acc"):
                v = getattr(self.initial, key)
                if v is not None and len(v) != n:
                    raise ValueError(f"initial.{key} has {len(v)} entries, metric dimension is {n}")
        return self


def load_config(path):
    with open(path) as fh:
        return ExperimentConfig.model_validate(json.load(fh))


def build_factor(spec, n):
    if spec.kind == "stereographic":
        return mf.stereographic_factor()
    if spec.kind == "constant":
        return mf.constant_factor(spec.value)
    return mf.exponential_factor(spec.coeffs, spec.offset)


def _named(name, n):
    return mf.euclidean(n) if name == "euclidean" else mf.round_sphere(n)


def build_base(spec):
    return _named(spec.base if spec.metric == "rescaled" else spec.metric, spec.dimension)


def build_field(spec):
    n = spec.dimension
    if spec.metric == "rescaled":
        field = mf.conformal_rescale(_named(spec.base, n), build_factor(spec.omega, n))
    else:
        field = _named(spec.metric, n)
    if spec.deriv_mode == "finite_difference":
        field = field.with_finite_differences(spec.fd_step)
    return field


def default_tolerance():
    """Integrator atol/rtol, overridable through the GEO_TOL environment variable."""
    raw = os.environ.get("GEO_TOL")
    if raw is None:
        return 1e-10
    value = float(raw)
    if not value > 0:
        raise ValueError(f"GEO_TOL must be positive, got {raw!r}")
    return value


def build_control(spec=None):
    spec = spec or ControlSpec()
    tol = default_tolerance()
    return StepControl(
        atol=spec.atol if spec.atol is not None else tol,
        rtol=spec.rtol if spec.rtol is not None else tol,
        h0=spec.h0, h_min=spec.h_min, h_max=spec.h_max,
        acc_blowup=spec.acc_blowup, pos_blowup=spec.pos_blowup,
        param_blowup=spec.param_blowup,
    )


def build_state(spec):
    if spec.vel is None or spec.acc is None:
        raise ValueError("initial state needs 'vel' and 'acc'")
    return GeodesicState(spec.formulation, np.array(spec.x), np.array(spec.vel),
                         np.array(spec.acc), spec.param)


def build_mobius(spec):
    return Mobius(*spec.mobius) if spec.mobius is not None else Mobius.reversal()
