"""Invariance suites comparing pairs (or triples) of integration runs."""

import numpy as np
from scipy.integrate import quad

from . import geodesic as geo
from .integrate import integrate, resample_by_arclength
from .metric import conformal_rescale, metric_at


def _param_matched(ref, other, to_ref=lambda p: p):
    """Max chart distance between ``other``'s samples and ``ref`` at the matching parameter."""
    lo, hi = ref.params[0], ref.params[-1]
    worst = 0.0
    for s in other.samples:
        p = to_ref(s.param)
        if lo - 1e-12 <= p <= hi + 1e-12:
            worst = max(worst, float(np.linalg.norm(ref.position_at(min(max(p, lo), hi)) - s.x)))
    return worst


def point_set_deviation(a, b):
    """Symmetric sampled Hausdorff distance between two interpolated curves."""
    d_ab = max(a.distance_to(x) for x in b.positions)
    d_ba = max(b.distance_to(x) for x in a.positions)
    return max(d_ab, d_ba)


def conformal_invariance(field, cf, init, param_end, ctrl=None):
    """Run ``init`` under g and the transformed data under Omega^2 g."""
    hatted = conformal_rescale(field, cf)
    base = integrate(field, init, param_end, ctrl)
    if init.formulation == "C":
        # arc length differs between the two metrics; cover the same arc
        t0 = init.param
        param_end = t0 + quad(lambda t: cf(base.position_at(t)), t0, base.final.param,
                              epsabs=1e-13, epsrel=1e-12, limit=200)[0]
    resc = integrate(hatted, geo.rescale_state(init, field, cf), param_end, ctrl)
    report = {
        "point_set": point_set_deviation(base, resc),
        "terminations": [base.termination, resc.termination],
    }
    if init.formulation != "C":
        report["parameter"] = max(_param_matched(base, resc), _param_matched(resc, base))
    return report


def mobius_invariance(field, init, m, param_end, ctrl=None):
    """Compare the run from ``init`` with the run from Mobius-reparameterised data.

    Orientation-reversing maps are applied to the final state of the
    original run, so both runs integrate forward over the same arc.
    """
    t0, t1 = init.param, float(param_end)
    if (m.c * t0 + m.d) * (m.c * t1 + m.d) <= 0:
        raise ValueError("Mobius map has a pole inside the parameter range")
    base = integrate(field, init, t1, ctrl)
    if m.derivative(t0) > 0:
        start, stop = geo.mobius_reparam(init, m, metric_at(field, init.x)), m(t1)
    else:
        end = base.final
        start, stop = geo.mobius_reparam(end, m, metric_at(field, end.x)), m(t0)
    other = integrate(field, start, stop, ctrl)
    back = m.inverse()
    return {
        "point_set": point_set_deviation(base, other),
        "parameter": _param_matched(base, other, back),
        "terminations": [base.termination, other.termination],
    }


def formulation_runs(field, init, param_end, ctrl=None):
    """Integrate matched A-, B- and C-form data; the C run covers the same arc length."""
    if init.formulation != "A":
        raise ValueError("formulation_runs expects A-form initial data")
    g = metric_at(field, init.x)
    run_a = integrate(field, init, param_end, ctrl)
    run_b = integrate(field, geo.convert(init, "B", g), param_end, ctrl)
    length = run_a.arclength[-1]
    run_c = integrate(field, geo.convert(init, "C", g), length, ctrl)
    return run_a, run_b, run_c


def formulation_equivalence(field, init, param_end, ctrl=None, n_points=200):
    runs = formulation_runs(field, init, param_end, ctrl)
    length = min(r.arclength[-1] for r in runs)
    s = np.linspace(0.0, length, n_points)
    pos = [resample_by_arclength(r, s) for r in runs]
    gap = max(float(np.max(np.linalg.norm(pos[i] - pos[j], axis=1)))
              for i, j in ((0, 1), (0, 2), (1, 2)))
    return {
        "arclength_gap": gap,
        "arclength": length,
        "terminations": [r.termination for r in runs],
    }
