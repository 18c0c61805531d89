"""``geo`` command-line front end.

Exit codes: 0 success, 2 invalid configuration or arguments, 3 unsupported
dimension, 4 integration ended early (blowup, left domain, step underflow),
5 an invariance or monotonicity check exceeded its tolerance.
"""

import argparse
import json
import sys

import numpy as np
from pydantic import ValidationError

from . import checks, config, cone, oracle, serialize
from .curvature import curvature_at
from .errors import GeometryError, UnsupportedDimensionError
from .integrate import integrate
from .metric import constant_factor

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_DIMENSION = 3
EXIT_EARLY_STOP = 4
EXIT_TOLERANCE = 5


class CliError(Exception):
    def __init__(self, message, code=EXIT_INVALID):
        super().__init__(message)
        self.code = code


def _emit(text, out):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load(args, required=True):
    if args.config is None:
        if required:
            raise CliError("--config is required for this command")
        cfg = config.ExperimentConfig()
    else:
        try:
            cfg = config.load_config(args.config)
        except ValidationError as exc:
            raise CliError(f"invalid config {args.config}:\n{exc}") from exc
        except (OSError, json.JSONDecodeError) as exc:
            raise CliError(f"cannot read config {args.config}: {exc}") from exc
    out = args.out if args.out is not None else cfg.output.path
    fmt = args.format if args.format is not None else cfg.output.format
    return cfg, out, fmt


def _need(cfg, *keys):
    for key in keys:
        if getattr(cfg, key) is None:
            raise CliError(f"config needs a '{key}' section")


def cmd_curvature(args):
    cfg, out, _ = _load(args)
    _need(cfg, "metric", "initial")
    field = config.build_field(cfg.metric)
    try:
        curv = curvature_at(field, np.array(cfg.initial.x))
    except UnsupportedDimensionError as exc:
        raise CliError(str(exc), EXIT_DIMENSION) from exc
    _emit(serialize.to_json(curv.to_dict()), out)
    return EXIT_OK


def cmd_integrate(args):
    cfg, out, fmt = _load(args)
    _need(cfg, "metric", "initial")
    field = config.build_field(cfg.metric)
    traj = integrate(field, config.build_state(cfg.initial), cfg.range.param_end,
                     config.build_control(cfg.control))
    _emit(serialize.trajectory_text(traj, fmt), out)
    print(f"termination: {traj.termination}", file=sys.stderr)
    return EXIT_OK if traj.completed else EXIT_EARLY_STOP


ORACLE_OPS = ("eval_circle", "circle_center_radius", "line_param", "limit_point", "endpoint_sigma")


def _oracle_result(args):
    p = oracle.CircleParams(args.alpha, args.beta, args.dim)
    if args.op == "eval_circle":
        return {"point": oracle.eval_circle(p, args.tau).tolist()}
    if args.op == "circle_center_radius":
        center, radius = oracle.circle_center_radius(p)
        return {"center": center.tolist(), "radius": radius}
    if args.op == "line_param":
        return {"x": oracle.line_param(args.alpha, args.tau)}
    if args.op == "limit_point":
        return {"point": oracle.limit_point(p).tolist()}
    ep = oracle.endpoint_sigma(args.alpha, args.sigma, args.dim)
    return {"point": ep.tolist(), "norm": float(np.linalg.norm(ep))}


def cmd_oracle(args):
    _, out, _ = _load(args, required=False)
    result = {"op": args.op, "alpha": args.alpha, "beta": args.beta, "tau": args.tau,
              "sigma": args.sigma, **_oracle_result(args)}
    _emit(serialize.to_json(result), out)
    return EXIT_OK


def _float_list(text):
    return [float(v) for v in text.split(",") if v.strip()]


def cmd_cone(args):
    cfg, out, fmt = _load(args, required=False)
    n = args.dim
    if cfg.metric is not None:
        if cfg.metric.metric != "euclidean":
            raise CliError("the cone experiment runs in the flat chart; use metric 'euclidean'")
        n = n or cfg.metric.dimension
    n = n or 3
    sigmas = _float_list(args.sigma) if args.sigma else cone.DEFAULT_SIGMAS
    alphas = _float_list(args.alpha) if args.alpha else cone.DEFAULT_ALPHAS
    report = cone.cone_report(sigmas, alphas, n, config.build_control(cfg.control), args.jobs)
    if fmt == "csv":
        text = serialize.to_csv(report.header(), [[repr(float(v)) for v in row] for row in report.table()])
    else:
        text = serialize.to_json(report.to_dict())
    _emit(text, out)
    problems = report.monotonicity_violations()
    for p in problems:
        print(p, file=sys.stderr)
    early = [r for r in report.rows if r.termination != "completed"]
    for r in early:
        print(f"sigma={r.sigma} alpha={r.alpha}: {r.termination}", file=sys.stderr)
    if problems:
        return EXIT_TOLERANCE
    return EXIT_EARLY_STOP if early else EXIT_OK


def cmd_invariance(args):
    cfg, out, _ = _load(args)
    _need(cfg, "metric", "initial")
    tol = cfg.control.tolerance
    base = config.build_base(cfg.metric)
    if cfg.metric.deriv_mode == "finite_difference":
        base = base.with_finite_differences(cfg.metric.fd_step)
    n = cfg.metric.dimension
    cf = config.build_factor(cfg.metric.omega, n) if cfg.metric.omega else constant_factor(1.0)
    ctrl = config.build_control(cfg.control)
    init = config.build_state(cfg.initial)
    t1 = cfg.range.param_end

    conf = checks.conformal_invariance(base, cf, init, t1, ctrl)
    report = {"tolerance": tol, "conformal": conf}
    if init.formulation == "A":
        report["mobius"] = checks.mobius_invariance(base, init, config.build_mobius(cfg.initial), t1, ctrl)

    deviations = {}
    for suite in ("conformal", "mobius"):
        for key in ("point_set", "parameter"):
            if suite in report and key in report[suite]:
                deviations[f"{suite}.{key}"] = float(report[suite][key])
    report["max_deviation"] = max(deviations.values())
    _emit(serialize.to_json(report), out)
    failed = {k: v for k, v in deviations.items() if not v <= tol}
    for k, v in sorted(failed.items()):
        print(f"{k} deviation {v!r} exceeds tolerance {tol!r}", file=sys.stderr)
    return EXIT_TOLERANCE if failed else EXIT_OK


COMMANDS = {
    "curvature": cmd_curvature,
    "integrate": cmd_integrate,
    "oracle": cmd_oracle,
    "cone": cmd_cone,
    "invariance": cmd_invariance,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="geo", description="Conformal geodesic toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON experiment configuration")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"))
        return p

    common(sub.add_parser("curvature", help="curvature tensors at initial.x"))
    common(sub.add_parser("integrate", help="integrate one conformal geodesic"))
    common(sub.add_parser("invariance", help="conformal and Mobius invariance report"))

    orc = common(sub.add_parser("oracle", help="closed-form flat conformal circles"))
    orc.add_argument("op", choices=ORACLE_OPS)
    orc.add_argument("--alpha", type=float, default=0.0)
    orc.add_argument("--beta", type=float, default=0.0)
    orc.add_argument("--tau", type=float, default=1.0)
    orc.add_argument("--sigma", type=float, default=0.0)
    orc.add_argument("--dim", type=int, default=2)

    cn = common(sub.add_parser("cone", help="endpoint limit as alpha -> 2"))
    cn.add_argument("--sigma", help="comma-separated slopes, |sigma| <= 1")
    cn.add_argument("--alpha", help="comma-separated alphas < 2")
    cn.add_argument("--dim", type=int, help="ambient dimension (default 3)")
    cn.add_argument("--jobs", type=int, default=1)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except CliError as exc:
        print(f"geo {args.command}: {exc}", file=sys.stderr)
        return exc.code
    except (GeometryError, ValueError) as exc:
        print(f"geo {args.command}: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
