"""CSV and JSON writers. Floats are written with ``repr`` so output is byte-stable."""

import csv
import io
import json


def _f(v):
    return repr(float(v))


def trajectory_rows(traj):
    n = traj.samples[0].dimension
    header = (["param"] + [f"x_{i + 1}" for i in range(n)]
              + [f"vel_{i + 1}" for i in range(n)] + [f"acc_{i + 1}" for i in range(n)])
    rows = [[_f(s.param)] + [_f(v) for v in (*s.x, *s.vel, *s.acc)] for s in traj.samples]
    return header, rows


def trajectory_dict(traj):
    return {
        "metric": traj.metric_name,
        "formulation": traj.formulation,
        "dimension": traj.samples[0].dimension,
        "termination": traj.termination,
        "samples": [
            {"param": s.param, "x": s.x.tolist(), "vel": s.vel.tolist(), "acc": s.acc.tolist()}
            for s in traj.samples
        ],
    }


def to_csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def to_json(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def trajectory_text(traj, fmt):
    if fmt == "csv":
        return to_csv(*trajectory_rows(traj))
    return to_json(trajectory_dict(traj))
