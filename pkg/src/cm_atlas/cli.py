"""Command-line interface with machine-readable, byte-stable reports.

Exit codes: 0 = all assertions pass, 1 = a mathematical disagreement or
violation was found, 2 = usage or domain error.  Floats are rendered in
fixed 17-significant-digit scientific notation so identical configurations
produce byte-identical JSON/CSV.
"""

from __future__ import annotations

import argparse
import io
import os
import sys

from .cmcheck import CmReport, cm_verify, find_violation, sharp_lambda_estimate
from .errors import BracketError, CmAtlasError
from .families import (
    GridSpec,
    ParamTriple,
    capital_lambda,
    delta,
    digamma,
    h_func,
    kernel_g,
    ln_h,
    phi,
    theta,
    z_func,
)
from .ineq import REGISTRY, InequalityVerdict, run_registry
from .specfun import polygamma

SCHEMA_VERSION = 1

ENV_GRID = "CM_ATLAS_GRID"

_EVAL_FAMILIES = (
    "delta", "theta", "h", "ln_h", "phi", "z", "lambda_fn", "kernel",
    "psi", "polygamma",
)


class UsageError(Exception):
    pass


def fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    return format(float(v), ".16e")


def render_json(obj, indent: int = 0) -> str:
    """Deterministic JSON with fixed float formatting and insertion order."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f'{pad}  "{k}": {render_json(v, indent + 1)}' for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}  {render_json(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt(obj)
    return '"' + str(obj).replace("\\", "\\\\").replace('"', '\\"') + '"'


def _grid_from_string(text: str) -> GridSpec:
    parts = text.split(",")
    if len(parts) != 4:
        raise UsageError(
            f"grid spec must be 'delta,x_max,n,log|lin', got {text!r}"
        )
    spacing = {"log": "log", "lin": "linear", "linear": "linear"}.get(parts[3].strip())
    if spacing is None:
        raise UsageError(f"grid spacing must be 'log' or 'lin', got {parts[3]!r}")
    try:
        return GridSpec(float(parts[0]), float(parts[1]), int(parts[2]), spacing)
    except ValueError as exc:
        raise UsageError(f"bad grid spec {text!r}: {exc}")


def _resolve_grid(args) -> GridSpec:
    # Precedence: CLI flag > CM_ATLAS_GRID env var > built-in default.
    if getattr(args, "grid", None):
        return _grid_from_string(args.grid)
    env = os.environ.get(ENV_GRID)
    if env:
        return _grid_from_string(env)
    return GridSpec()


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# eval

def _cmd_eval(args) -> int:
    fam = args.family
    if fam not in _EVAL_FAMILIES:
        raise UsageError(f"unknown family {fam!r}; expected one of {_EVAL_FAMILIES}")

    def value_at(x: float) -> float:
        if fam == "psi":
            return digamma(x).value
        if fam == "polygamma":
            if args.k is None:
                raise UsageError("polygamma requires --k")
            return polygamma(args.k, x).value
        if fam == "kernel":
            _need(args, "s", "t")
            return kernel_g(args.s, args.t, x)
        if fam == "z":
            _need(args, "s", "t")
            return z_func(args.s, args.t, x)
        if fam == "lambda_fn":
            _need(args, "s", "t")
            return capital_lambda(args.s, args.t, x)
        if fam == "phi":
            return phi(x)
        _need(args, "s", "t", "lam")
        p = ParamTriple(args.s, args.t, args.lam)
        return {"delta": delta, "theta": theta, "h": h_func, "ln_h": ln_h}[fam](p, x)

    point = args.u if fam == "kernel" else args.x
    if point is not None:
        value = value_at(float(point))
        _emit(fmt(value) + "\n", args.out)
        return 0
    grid = _resolve_grid(args)
    alpha = min(args.s, args.t) if args.s is not None and args.t is not None else 0.0
    lines = [f"{fmt(float(x))}\t{fmt(value_at(float(x)))}" for x in grid.points(alpha)]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _need(args, *names) -> None:
    for name in names:
        if getattr(args, name, None) is None:
            flag = "--lambda" if name == "lam" else f"--{name}"
            raise UsageError(f"family {args.family!r} requires {flag}")


# ---------------------------------------------------------------------------
# cm-check

def _report_dict(report: CmReport, witnesses) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "family": report.family,
        "s": report.params.s,
        "t": report.params.t,
        "lambda": report.params.lam,
        "max_order": report.max_order,
        "verdict": report.verdict,
        "predicted": report.predicted,
        "agree": report.agree,
        "per_order": [
            {"order": n, "min": v, "argmin_x": x}
            for n, v, x in report.per_order_min
        ],
        "witnesses": [
            {"order": w.order, "x": w.x, "value": w.value} for w in witnesses
        ],
    }


def _cmd_cm_check(args) -> int:
    if args.family not in ("delta", "theta"):
        raise UsageError("cm-check family must be 'delta' or 'theta'")
    _need(args, "s", "t", "lam")
    grid = _resolve_grid(args)
    p = ParamTriple(args.s, args.t, args.lam)
    report = cm_verify(args.family, p, args.max_order, grid)
    witnesses = []
    for sign in ("cm", "negcm"):
        w = find_violation(args.family, p, sign, args.max_order, grid)
        if w is not None:
            witnesses.append(w)
    doc = _report_dict(report, witnesses)
    if args.format == "human":
        lines = [
            f"family={report.family} s={report.params.s:g} t={report.params.t:g} "
            f"lambda={report.params.lam:g}",
            f"verdict={report.verdict} predicted={report.predicted} "
            f"agree={report.agree}",
        ]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(render_json(doc) + "\n", args.out)
    return 0 if report.agree else 1


# ---------------------------------------------------------------------------
# sharp

def _cmd_sharp(args) -> int:
    if args.family not in ("delta", "theta"):
        raise UsageError("sharp family must be 'delta' or 'theta'")
    _need(args, "s", "t")
    if args.direction not in ("cm-upper", "negcm-lower"):
        raise UsageError("direction must be 'cm-upper' or 'negcm-lower'")
    grid = _resolve_grid(args)
    gap = abs(args.t - args.s)
    if args.direction == "cm-upper":
        theory = 1.0 if gap <= 1.0 else 1.0 / gap
    else:
        if gap == 0.0:
            raise UsageError("negcm-lower requires s != t")
        theory = 1.0 if gap >= 1.0 else 1.0 / gap
    estimate = sharp_lambda_estimate(
        args.family, args.s, args.t, args.direction, args.max_order, grid
    )
    gap_abs = abs(estimate - theory)
    doc = {
        "schema": SCHEMA_VERSION,
        "family": args.family,
        "s": args.s,
        "t": args.t,
        "direction": args.direction,
        "estimate": estimate,
        "theory": theory,
        "abs_gap": gap_abs,
    }
    if args.format == "human":
        _emit(
            f"lambda* = {fmt(estimate)} theory = {fmt(theory)} "
            f"gap = {fmt(gap_abs)}\n",
            args.out,
        )
    else:
        _emit(render_json(doc) + "\n", args.out)
    return 0 if gap_abs <= 1e-2 else 1


# ---------------------------------------------------------------------------
# inequalities

_CSV_HEADER = "name,holds,worst_margin,witness_x,lhs,rhs"


def _verdict_row(v: InequalityVerdict) -> str:
    return ",".join([
        v.name,
        "true" if v.holds else "false",
        fmt(v.worst_margin),
        fmt(v.witness[0]),
        fmt(v.witness[1]),
        fmt(v.witness[2]),
    ])


def _verdict_dict(v: InequalityVerdict) -> dict:
    return {
        "name": v.name,
        "domain_swept": v.domain_swept,
        "holds": v.holds,
        "worst_margin": v.worst_margin,
        "witness_x": v.witness[0],
        "lhs": v.witness[1],
        "rhs": v.witness[2],
    }


def _cmd_inequalities(args) -> int:
    if not args.all and not args.name:
        raise UsageError("provide --name or --all")
    kw = {}
    for key in ("a", "b", "x", "beta", "gamma", "alpha"):
        val = getattr(args, key, None)
        if val is not None:
            kw[key] = val
    for key in ("k", "n"):
        val = getattr(args, key, None)
        if val is not None:
            kw[key] = val
    try:
        verdicts = run_registry(None if args.all else args.name, **kw)
    except KeyError as exc:
        raise UsageError(str(exc))
    if args.format == "json":
        doc = {
            "schema": SCHEMA_VERSION,
            "verdicts": [_verdict_dict(v) for v in verdicts],
        }
        _emit(render_json(doc) + "\n", args.out)
    else:
        buf = io.StringIO()
        buf.write(_CSV_HEADER + "\r\n")
        for v in verdicts:
            buf.write(_verdict_row(v) + "\r\n")
        _emit(buf.getvalue(), args.out)
    return 0 if all(v.holds for v in verdicts) else 1


# ---------------------------------------------------------------------------
# report

_REPORT_MATRIX_GAPS = (0.3, 1.0, 2.0)
_REPORT_MATRIX_S = (0.0, 0.5)
_REPORT_SHARP = ((0.4, "cm-upper"), (0.4, "negcm-lower"), (2.5, "cm-upper"))


def _matrix_lambdas(gap: float) -> list[float]:
    lams = [0.2, 0.95, 1.05, 5.0]
    if gap != 1.0:
        thr = 1.0 / gap
        lams.extend([thr - 0.05, thr + 0.05])
    return lams


def _cmd_report(args) -> int:
    grid = _resolve_grid(args) if args.grid else GridSpec(1e-3, 1e4, 200, "log")
    ok = True
    matrix = []
    for family in ("delta", "theta"):
        for gap in _REPORT_MATRIX_GAPS:
            for s in _REPORT_MATRIX_S:
                for lam in _matrix_lambdas(gap):
                    p = ParamTriple(s, s + gap, lam)
                    rep = cm_verify(family, p, 4, grid)
                    ok = ok and rep.agree
                    matrix.append({
                        "family": family,
                        "s": s,
                        "t": s + gap,
                        "lambda": lam,
                        "verdict": rep.verdict,
                        "predicted": rep.predicted,
                        "agree": rep.agree,
                    })
    sharp = []
    for gap, direction in _REPORT_SHARP:
        est = sharp_lambda_estimate("delta", 0.0, gap, direction, 2, grid)
        if direction == "cm-upper":
            theory = 1.0 if gap <= 1.0 else 1.0 / gap
        else:
            theory = 1.0 if gap >= 1.0 else 1.0 / gap
        ok = ok and abs(est - theory) <= 1e-2
        sharp.append({
            "gap": gap,
            "direction": direction,
            "estimate": est,
            "theory": theory,
        })
    verdicts = run_registry()
    ok = ok and all(v.holds for v in verdicts)
    doc = {
        "schema": SCHEMA_VERSION,
        "cm_matrix": matrix,
        "sharp": sharp,
        "inequalities": [_verdict_dict(v) for v in verdicts],
        "all_pass": ok,
    }
    _emit(render_json(doc) + "\n", args.out)
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# Parser

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cm-atlas",
        description="Divided-difference polygamma families: evaluation, "
        "complete-monotonicity checks, sharp constants, inequalities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, fmt_default="human"):
        sp.add_argument("--grid", help="delta,x_max,n,log|lin")
        sp.add_argument("--format", choices=("json", "csv", "human"),
                        default=fmt_default)
        sp.add_argument("--out", help="write output to this path")

    sp = sub.add_parser("eval", help="evaluate a family at a point or on a grid")
    sp.add_argument("--family", required=True)
    sp.add_argument("--s", type=float)
    sp.add_argument("--t", type=float)
    sp.add_argument("--lambda", dest="lam", type=float)
    sp.add_argument("--x", type=float)
    sp.add_argument("--u", type=float)
    sp.add_argument("--k", type=int)
    common(sp)
    sp.set_defaults(func=_cmd_eval)

    sp = sub.add_parser("cm-check", help="verify complete monotonicity on a grid")
    sp.add_argument("--family", required=True)
    sp.add_argument("--s", type=float, required=True)
    sp.add_argument("--t", type=float, required=True)
    sp.add_argument("--lambda", dest="lam", type=float, required=True)
    sp.add_argument("--max-order", type=int, default=6)
    common(sp, "json")
    sp.set_defaults(func=_cmd_cm_check)

    sp = sub.add_parser("sharp", help="recover the sharp lambda threshold")
    sp.add_argument("--family", default="delta")
    sp.add_argument("--s", type=float, required=True)
    sp.add_argument("--t", type=float, required=True)
    sp.add_argument("--direction", required=True)
    sp.add_argument("--max-order", type=int, default=4)
    common(sp)
    sp.set_defaults(func=_cmd_sharp)

    sp = sub.add_parser("inequalities", help="run named or all inequality checks")
    sp.add_argument("--name", choices=sorted(REGISTRY))
    sp.add_argument("--all", action="store_true")
    sp.add_argument("--a", type=float)
    sp.add_argument("--b", type=float)
    sp.add_argument("--x", type=float)
    sp.add_argument("--k", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--beta", type=float)
    sp.add_argument("--gamma", type=float)
    sp.add_argument("--alpha", type=float)
    common(sp, "csv")
    sp.set_defaults(func=_cmd_inequalities)

    sp = sub.add_parser("report", help="run the combined verification report")
    common(sp, "json")
    sp.set_defaults(func=_cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (UsageError, CmAtlasError, BracketError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
