"""Command-line interface: ``tps verify|gauge|pullback|curvature|length``.

stdout carries the report (JSON or CSV), stderr carries warnings and errors.
Exit codes: 0 success, 1 failed invariant or singularity, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .analysis import SingularMetricError, curvature_scan, hessian_metric_field, scalar_curvature
from .chart import DarbouxPoint, to_adapted
from .contact import eta_covector, reeb
from .errors import EvaluationError, GaugeSingularityError, TPSError
from .exprlang import GRAMMAR, ExprError, compile_function
from .gauge import GaugeFactor, transform, verify_gauge
from .structure import metric_G, phi_matrix
from .suites import chart_suite, contact_suite, default_gauges, gauge_suite, sample_points, structure_suite
from .thermo import (
    FundamentalRelation,
    ProcessCurve,
    gauged_metric,
    model_from_config,
    process_length,
    pullback_metric,
    pullback_of_G,
)

SCHEMA = "tps-report/1"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    """Bad configuration; reported on stderr with exit code 2."""


@dataclass
class RunConfig:
    subcommand: str
    n: int = 1
    seed: int = 0
    points: int = 100
    tol: float = 1e-9
    omega: Optional[str] = None
    model: Optional[str] = None
    output: str = "json"
    extra: dict = field(default_factory=dict)

    def validate(self):
        if self.n < 1:
            raise UsageError("n must be ≥ 1")
        if self.points < 1:
            raise UsageError("points must be ≥ 1")
        if not self.tol > 0:
            raise UsageError("tol must be > 0")
        if not 0 <= self.seed < 2 ** 64:
            raise UsageError("seed must be a 64-bit unsigned integer")


def _dump(report: dict) -> str:
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


def _floats(a) -> list:
    return (np.asarray(a, dtype=float) + 0.0).tolist()  # drops negative zeros


def _model(text: Optional[str]):
    if text is None:
        raise UsageError("--model is required")
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"--model is not valid JSON: {exc}") from None
    if not isinstance(cfg, dict):
        raise UsageError("--model must be a JSON object")
    try:
        return model_from_config(cfg), cfg
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from None


def _relation(args) -> tuple[FundamentalRelation, dict]:
    if args.relation is not None:
        names = [v.strip() for v in args.vars.split(",") if v.strip()]
        if not names:
            raise UsageError("--vars needs at least one name")
        try:
            func = compile_function(args.relation, names)
        except ExprError as exc:
            raise UsageError(f"--relation: {exc}") from None
        return FundamentalRelation(func, len(names), name=args.relation, variables=names), {"relation": args.relation}
    model, cfg = _model(args.model)
    rel = model.energy if args.potential == "energy" else model.entropy
    return rel, {"model": cfg, "potential": args.potential}


def _grid(spec: Optional[str], arity: int) -> list[tuple[float, ...]]:
    """``"a:b:k,c:d:m"``: ``k`` evenly spaced values per axis, row-major product."""
    if spec is None:
        raise UsageError("--grid is required")
    axes = []
    for part in spec.split(","):
        bits = part.split(":")
        try:
            if len(bits) == 1:
                axes.append([float(bits[0])])
                continue
            lo, hi, k = float(bits[0]), float(bits[1]), int(bits[2])
        except (ValueError, IndexError):
            raise UsageError(f"bad grid axis {part!r}; expected start:stop:count") from None
        if k < 1:
            raise UsageError("grid counts must be ≥ 1")
        axes.append(np.linspace(lo, hi, k).tolist() if k > 1 else [lo])
    if len(axes) != arity:
        raise UsageError(f"grid has {len(axes)} axes, relation takes {arity}")
    return list(itertools.product(*axes))


def _gauge_factor(src: str, n: int) -> GaugeFactor:
    try:
        return GaugeFactor(src, n=n)
    except ExprError as exc:
        raise UsageError(f"--omega: {exc}") from None


def _parse_at(text: Optional[str], n: int) -> DarbouxPoint:
    if text is None:
        raise UsageError("--at is required")
    values = {}
    for part in text.split(","):
        name, sep, val = part.partition("=")
        try:
            values[name.strip()] = float(val)
        except ValueError:
            raise UsageError(f"bad coordinate assignment {part!r}") from None
        if not sep:
            raise UsageError(f"bad coordinate assignment {part!r}")
    try:
        return DarbouxPoint.from_dict(values, n)
    except (TPSError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(x)) for x in row])
    return buf.getvalue()


# Subcommands.  Each returns (exit code, stdout text).


def cmd_verify(cfg: RunConfig) -> tuple[int, str]:
    points, rng = sample_points(cfg.n, cfg.points, cfg.seed)
    omegas = [cfg.omega] if cfg.omega is not None else default_gauges(cfg.n)
    for src in omegas:
        _gauge_factor(src, cfg.n)
    try:
        suites = {
            "chart": chart_suite(points, rng),
            "contact": contact_suite(points, rng),
            "structure": structure_suite(points, rng),
            "gauge": gauge_suite(points, omegas),
        }
    except EvaluationError as exc:
        return EXIT_FAIL, _dump({"schema": SCHEMA, "command": "verify", "status": "error", "error": str(exc)})
    residuals, checks, failed = {}, {}, []
    for suite, values in suites.items():
        checks[suite] = {}
        for name, value in values.items():
            ok = value <= cfg.tol
            residuals[name] = value
            checks[suite][name] = {"value": value, "pass": ok}
            if not ok:
                failed.append(name)
    report = {
        "schema": SCHEMA,
        "command": "verify",
        "config": {"n": cfg.n, "points": cfg.points, "seed": cfg.seed, "tol": cfg.tol, "omegas": omegas},
        "status": "pass" if not failed else "fail",
        "failed": failed,
        "residuals": residuals,
        "suites": checks,
    }
    return (EXIT_OK if not failed else EXIT_FAIL), _dump(report)


def _adapted(vec, at) -> dict:
    x_xi, xp, xq = to_adapted(vec, at)
    return {"xi": x_xi, "P": _floats(xp), "Q": _floats(xq)}


def cmd_gauge(cfg: RunConfig) -> tuple[int, str]:
    if cfg.omega is None:
        raise UsageError("--omega is required")
    factor = _gauge_factor(cfg.omega, cfg.n)
    at = _parse_at(cfg.extra.get("at"), cfg.n)
    head = {"schema": SCHEMA, "command": "gauge", "n": cfg.n, "omega": cfg.omega, "at": at.as_dict()}
    try:
        gs = transform(at, factor)
        residuals = verify_gauge(at, factor)
    except GaugeSingularityError as exc:
        sys.stderr.write(f"gauge singularity: {exc}\n")
        return EXIT_FAIL, _dump({**head, "status": "error", "error": f"gauge singularity: {exc}"})
    except EvaluationError as exc:
        sys.stderr.write(f"evaluation failed: {exc}\n")
        return EXIT_FAIL, _dump({**head, "status": "error", "error": str(exc)})
    failed = sorted(k for k, v in residuals.items() if not v <= cfg.tol)
    report = {
        **head,
        "status": "pass" if not failed else "fail",
        "omega_value": gs.omega,
        "d_omega": _floats(gs.d_omega.coord),
        "zeta": {"coords": _floats(gs.zeta.coord), "adapted": _adapted(gs.zeta.coord, at)},
        "primed": {
            "eta": _floats(gs.eta_prime.coord),
            "xi": _floats(gs.xi_prime.coord),
            "phi": _floats(gs.phi_prime.matrix),
            "G": _floats(gs.G_prime.matrix),
        },
        "unprimed": {
            "eta": _floats(eta_covector(at).coord),
            "xi": _floats(reeb(at).coord),
            "phi": _floats(phi_matrix(at).matrix),
            "G": _floats(metric_G(at).matrix),
        },
        "residuals": residuals,
        "failed": failed,
        "tol": cfg.tol,
    }
    return (EXIT_OK if not failed else EXIT_FAIL), _dump(report)


def _warn_skips(skipped: list[dict]):
    for s in skipped:
        sys.stderr.write(f"warning: skipped row {s['row']} at {s['point']}: {s['reason']}\n")
    if skipped:
        sys.stderr.write(f"warning: {len(skipped)} row(s) skipped\n")


def cmd_pullback(cfg: RunConfig) -> tuple[int, str]:
    rel, source = cfg.extra["relation"]
    grid = _grid(cfg.extra.get("grid"), rel.arity)
    rows, skipped = [], []
    for i, x in enumerate(grid):
        try:
            H = pullback_metric(rel, x)
            resid = float(np.max(np.abs(pullback_of_G(rel, x) - H)))
        except EvaluationError as exc:
            skipped.append({"row": i, "point": list(x), "reason": str(exc)})
            continue
        rows.append((i, x, H, resid))
    _warn_skips(skipped)
    names = rel.variables
    m = rel.arity
    if cfg.output == "csv":
        header = list(names) + [f"g_{names[a]}{names[b]}" for a in range(m) for b in range(m)]
        return EXIT_OK, _csv(header, [list(x) + H.ravel().tolist() for _, x, H, _ in rows])
    report = {
        "schema": SCHEMA,
        "command": "pullback",
        "source": source,
        "variables": list(names),
        "rows": [{"row": i, "point": list(x), "metric": _floats(H), "embedding_residual": r} for i, x, H, r in rows],
        "skipped": skipped,
        "warnings": len(skipped),
    }
    return EXIT_OK, _dump(report)


def cmd_curvature(cfg: RunConfig) -> tuple[int, str]:
    ex = cfg.extra
    if ex.get("scan"):
        model, mcfg = _model(cfg.model)
        if "T_c" not in model.constants:
            raise UsageError(f"model {model.name!r} has no critical point to scan towards")
        try:
            rows = curvature_scan(model, samples=ex["samples"], eps=ex["eps"], t_start=ex["t_start"],
                                  spacing=ex["spacing"])
        except EvaluationError as exc:
            sys.stderr.write(f"scan failed: {exc}\n")
            return EXIT_FAIL, ""
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if cfg.output == "csv":
            return EXIT_OK, _csv(["T", "R"], rows)
        return EXIT_OK, _dump({
            "schema": SCHEMA,
            "command": "curvature",
            "mode": "scan",
            "model": mcfg,
            "constants": model.constants,
            "rows": [{"T": T, "R": R} for T, R in rows],
        })
    rel, source = ex["relation"]
    grid = _grid(ex.get("grid"), rel.arity)
    field_ = hessian_metric_field(rel)
    rows, skipped = [], []
    for i, x in enumerate(grid):
        try:
            rel(x)
            rows.append((i, x, scalar_curvature(field_, x)))
        except (EvaluationError, SingularMetricError) as exc:
            skipped.append({"row": i, "point": list(x), "reason": str(exc)})
    _warn_skips(skipped)
    names = list(rel.variables)
    if cfg.output == "csv":
        return EXIT_OK, _csv(names + ["R"], [list(x) + [R] for _, x, R in rows])
    return EXIT_OK, _dump({
        "schema": SCHEMA,
        "command": "curvature",
        "mode": "grid",
        "source": source,
        "variables": names,
        "rows": [{"row": i, "point": list(x), "R": R} for i, x, R in rows],
        "skipped": skipped,
        "warnings": len(skipped),
    })


def _load_curve(text: Optional[str]) -> dict:
    if text is None:
        raise UsageError("--curve is required")
    if text.startswith("@"):
        try:
            with open(text[1:], encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read curve file: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"--curve is not valid JSON: {exc}") from None
    if isinstance(data, list):
        data = {"points": data}
    if not isinstance(data, dict) or "points" not in data:
        raise UsageError("--curve must be a list of points or an object with 'points'")
    return data


def cmd_length(cfg: RunConfig) -> tuple[int, str]:
    data = _load_curve(cfg.extra.get("curve"))
    try:
        curve = ProcessCurve.polyline(data["points"], data.get("times"))
        n = len(data["points"][0]) // 2
    except (TPSError, ValueError, TypeError) as exc:
        raise UsageError(f"bad curve: {exc}") from None
    metric = None
    if cfg.omega is not None:
        metric = gauged_metric(_gauge_factor(cfg.omega, n))
    steps = cfg.extra["steps"]
    if steps < 2:
        raise UsageError("steps must be ≥ 2")
    try:
        total, signs = process_length(curve, metric, steps=steps)
    except EvaluationError as exc:
        sys.stderr.write(f"evaluation failed: {exc}\n")
        return EXIT_FAIL, _dump({"schema": SCHEMA, "command": "length", "status": "error", "error": str(exc)})
    segments = len(data["points"]) - 1
    per_segment = [signs[k * steps:(k + 1) * steps] for k in range(segments)]
    return EXIT_OK, _dump({
        "schema": SCHEMA,
        "command": "length",
        "omega": cfg.omega,
        "steps": steps,
        "length": total,
        "sign_counts": {"positive": signs.count(1), "null": signs.count(0), "negative": signs.count(-1)},
        "segment_signs": [sorted(set(s)) for s in per_segment],
        "signs": signs,
    })


COMMANDS = {
    "verify": cmd_verify,
    "gauge": cmd_gauge,
    "pullback": cmd_pullback,
    "curvature": cmd_curvature,
    "length": cmd_length,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tps",
        description="Contact geometry of the thermodynamic phase space: identity checks, "
                    "gauge transformations, Hessian metrics and curvature.",
        epilog="Exit codes: 0 success, 1 failed invariant or singularity, 2 usage error.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    fmt = argparse.RawDescriptionHelpFormatter

    def add_n(p):
        p.add_argument("--n", type=int, default=1, help="degrees of freedom (default 1)")

    p = sub.add_parser("verify", help="run the identity suites at random points", formatter_class=fmt,
                       description="Run chart, contact, structure and gauge identity suites at seeded "
                                   "random points drawn from [-2,-0.1] U [0.1,2].\n\n" + GRAMMAR)
    add_n(p)
    p.add_argument("--points", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--omega", help="check a single gauge factor instead of the default set")

    p = sub.add_parser("gauge", help="primed structures for a gauge factor at one point", formatter_class=fmt,
                       description="Apply eta -> Omega eta at one point.\n\n" + GRAMMAR)
    add_n(p)
    p.add_argument("--omega", required=True, help="gauge factor expression, e.g. '1/p1'")
    p.add_argument("--at", required=True, help="point as 'w=..,p1=..,q1=..'")
    p.add_argument("--tol", type=float, default=1e-9)

    def add_relation(p, potential):
        p.add_argument("--model", help='JSON model, e.g. \'{"model":"vdw","a":1,"b":0.1,"cv":1.5}\'')
        p.add_argument("--potential", choices=("energy", "entropy"), default=potential,
                       help=f"which fundamental relation of the model (default {potential})")
        p.add_argument("--relation", help="fundamental relation as an expression instead of --model")
        p.add_argument("--vars", default="q1,q2", help="variable names of --relation (default q1,q2)")
        p.add_argument("--grid", help="'start:stop:count' per variable, comma separated")
        p.add_argument("--output", choices=("json", "csv"), default="json")

    p = sub.add_parser("pullback", help="Hessian metric of a fundamental relation on a grid",
                       formatter_class=fmt, description="Pull the contact metric back along the Legendre "
                                                         "embedding of a fundamental relation.\n\n" + GRAMMAR)
    add_relation(p, "energy")

    p = sub.add_parser("curvature", help="scalar curvature on a grid or along the critical isochore",
                       formatter_class=fmt, description="Scalar curvature of the Hessian metric.\n\n" + GRAMMAR)
    add_relation(p, "entropy")
    p.add_argument("--scan", action="store_true", help="scan v = v_c from t-start*T_c down to (1+eps)*T_c")
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--eps", type=float, default=1e-3)
    p.add_argument("--t-start", type=float, default=1.5)
    p.add_argument("--spacing", choices=("log", "linear"), default="log")

    p = sub.add_parser("length", help="length and sign profile of a polyline process", formatter_class=fmt,
                       description="Length of a polyline in Darboux coordinates under G or a gauged G'.\n\n"
                                   + GRAMMAR)
    p.add_argument("--curve", required=True, help="JSON list of points, or {'points':..,'times':..}; "
                                                  "prefix a file path with @")
    p.add_argument("--omega", help="measure with the metric of this gauge instead of G")
    p.add_argument("--steps", type=int, default=100, help="midpoint cells per segment")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(subcommand=args.subcommand)
    for name in ("n", "seed", "points", "tol", "omega", "model", "output"):
        if hasattr(args, name) and getattr(args, name) is not None:
            setattr(cfg, name, getattr(args, name))
    for name in ("at", "grid", "curve", "steps", "scan", "samples", "eps", "t_start", "spacing"):
        if hasattr(args, name):
            cfg.extra[name] = getattr(args, name)
    return cfg


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = config_from_args(args)
    try:
        cfg.validate()
        if cfg.subcommand in ("pullback", "curvature") and not cfg.extra.get("scan"):
            cfg.extra["relation"] = _relation(args)
        code, out = COMMANDS[cfg.subcommand](cfg)
    except UsageError as exc:
        sys.stderr.write(f"tps {cfg.subcommand}: error: {exc}\n")
        return EXIT_USAGE
    sys.stdout.write(out)
    sys.stdout.flush()
    return code


if __name__ == "__main__":
    raise SystemExit(main())
