"""Command-line front end.

Payloads go to stdout (or ``--out``) as JSON or CSV; diagnostics go to
stderr. Exit codes: 0 success, 2 bad input or flags, 3 numerical failure.
Every float is written with 17 significant digits so that JSON read back
in reproduces the same doubles.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from typing import Any, Optional, Sequence

import numpy as np

from .el_points import find_el_points, q3q4_locus
from .errors import InputError, NumericalError
from .euler_family import EulerSolution, build_solution, eval_f, eval_p, parametrize_G
from .lagrange import lagrange_points, verify_lagrange
from .numerics import DEFAULT_CONFIG, RootConfig
from .verify import accel_residual, check_es_equations, circular_states, integrate_nbody

SCHEMA_VERSION = "1"
PROG = "eulerlagrange"


# -- serialization -------------------------------------------------------------

def fmt_float(x: float) -> str:
    return format(float(x), ".17g")


def _to_json(obj: Any, indent: int = 0) -> str:
    """JSON with floats at 17 significant digits; non-finite floats become null."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {_to_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        if all(isinstance(v, (int, float, np.number)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_to_json(v) for v in obj) + "]"
        items = [inner + _to_json(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def envelope(command: str, inputs: dict, results: Any, residuals: Optional[dict] = None) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "results": results,
        "residuals": residuals,
    }
    return _to_json(doc) + "\n"


def _csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt_float(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _rows_as_dicts(header, rows):
    return [dict(zip(header, row)) for row in rows]


def _emit_table(args, header, rows) -> str:
    if args.format == "json":
        return envelope(args.command, _inputs(args), _rows_as_dicts(header, rows))
    return _csv(header, rows)


# -- payload builders ----------------------------------------------------------

def solution_dict(sol: EulerSolution) -> dict:
    return {"r2": sol.r2, "r3": sol.r3, "m1": sol.m1, "m2": sol.m2, "m3": sol.m3}


def solution_residuals(sol: EulerSolution) -> dict:
    res = dict(check_es_equations(sol).eq_residuals)
    res["p"] = eval_p(sol.r2, sol.r3)
    return res


def _inputs(args) -> dict:
    skip = {"command", "handler", "out", "format", "quiet"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


def _cfg(args) -> RootConfig:
    if args.tol is None:
        return DEFAULT_CONFIG
    return DEFAULT_CONFIG.with_(abs_tol=args.tol)


# -- commands ------------------------------------------------------------------

def cmd_family(args) -> str:
    if not 0.0 <= args.r2_min < args.r2_max:
        raise InputError("need 0 <= --r2-min < --r2-max")
    if args.samples < 2:
        raise InputError("--samples must be at least 2")
    cfg = _cfg(args)
    rows = []
    for r2 in np.linspace(args.r2_min, args.r2_max, args.samples):
        r2 = float(r2)
        r3 = eval_f(r2, cfg)
        rows.append((r2, r3, eval_p(r2, r3)))
    return _emit_table(args, ("r2", "r3", "p_residual"), rows)


def cmd_es(args) -> str:
    sol = build_solution(args.r2, args.m3, _cfg(args))
    return envelope("es", _inputs(args), solution_dict(sol), solution_residuals(sol))


def cmd_lagrange(args) -> str:
    cfg = _cfg(args)
    ls = lagrange_points(args.x, cfg)
    results = {"x": ls.x, "l1": ls.l1, "l2": ls.l2, "l3": ls.l3, "l4": list(ls.l4), "l5": list(ls.l5)}
    return envelope("lagrange", _inputs(args), results, verify_lagrange(args.x, cfg=cfg).eq_residuals)


def cmd_el(args) -> str:
    cfg = _cfg(args)
    els = find_el_points(build_solution(args.r2, args.m3, cfg), cfg)
    rows = [(p.klass.value, p.r4, p.r5, p.residual) for p in els.points]
    if args.format == "csv":
        return _csv(("class", "r4", "r5", "residual"), rows)
    results = {
        "solution": solution_dict(els.solution),
        "points": [{"class": k, "r4": x, "r5": y} for k, x, y, _ in rows],
    }
    residuals = {k: r for k, _, _, r in rows}
    return envelope("el", _inputs(args), results, residuals)


def cmd_curve(args) -> str:
    if not args.step > 0:
        raise InputError("--step must be positive")
    samples = q3q4_locus(args.r2, args.step, args.max_points, cfg=_cfg(args))
    rows = [(s.r4, s.r5, s.m3_common, int(s.physical)) for s in samples]
    return _emit_table(args, ("r4", "r5", "m3_common", "physical"), rows)


def cmd_param(args) -> str:
    if args.w is not None:
        ws = [args.w]
    else:
        if args.w_min is None or args.w_max is None:
            raise InputError("give --w or both --w-min and --w-max")
        if not args.w_min <= args.w_max or args.samples < 1:
            raise InputError("need --w-min <= --w-max and --samples >= 1")
        ws = [float(w) for w in np.linspace(args.w_min, args.w_max, args.samples)]
    rows = []
    for w in ws:
        g = parametrize_G(w)
        r3 = g + w + 1.0
        rows.append((w, g, r3, eval_p(g, r3)))
    return _emit_table(args, ("w", "G", "r3", "p_residual"), rows)


def _load_solution(path: str) -> EulerSolution:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        r = doc["results"]
        return EulerSolution.from_values(r["r2"], r["r3"], r["m1"], r["m2"], r["m3"])
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"cannot read an es document from {path}: {exc}") from exc


def cmd_verify(args) -> str:
    cfg = _cfg(args)
    if args.from_json:
        sol = _load_solution(args.from_json)
    elif args.r2 is not None and args.m3 is not None:
        sol = build_solution(args.r2, args.m3, cfg)
    else:
        raise InputError("give --r2 and --m3, or --from-json")
    if (args.r4 is None) != (args.r5 is None):
        raise InputError("--r4 and --r5 go together")

    residuals = solution_residuals(sol)
    probes = []
    if args.r4 is not None:
        probes = [(args.r4, args.r5)]
        rep = accel_residual(sol, args.r4, args.r5)
        residuals.update({f"probe_{k}": v for k, v in rep.eq_residuals.items()})
    results: dict[str, Any] = {
        "solution": solution_dict(sol),
        "max_residual": max(abs(v) for v in residuals.values()),
    }
    if args.integrate:
        if args.periods <= 0 or args.dt_div <= 0:
            raise InputError("--periods and --dt-div must be positive")
        if not probes and 0.0 < sol.m3 < (1.0 + sol.r3) ** 2:
            els = find_el_points(sol, cfg)
            probes = [(p.r4, p.r5) for p in els.points]
        traj = integrate_nbody(
            circular_states(sol, probes), 2 * math.pi * args.periods, 2 * math.pi / args.dt_div
        )
        results["drift"] = {
            "radius_drift": traj.drift.radius_drift,
            "angular_rate_drift": traj.drift.angular_rate_drift,
            "per_body_radius_drift": [float(v) for v in traj.radius_drift],
            "per_body_angular_rate_drift": [float(v) for v in traj.angular_rate_drift],
            "energy_drift": traj.energy_drift,
            "tracers": [list(p) for p in probes],
        }
    return envelope("verify", _inputs(args), results, residuals)


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default=None,
                        help="output format (default depends on the command)")
    common.add_argument("--out", default=None, help="write the payload here instead of stdout")
    common.add_argument("--tol", type=float, default=None, help="root-finding absolute tolerance")
    common.add_argument("--quiet", action="store_true", help="no timing line on stderr")

    p = argparse.ArgumentParser(prog=PROG, description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("family", parents=[common], help="sample r3 = f(r2)")
    s.add_argument("--r2-min", type=float, required=True)
    s.add_argument("--r2-max", type=float, required=True)
    s.add_argument("--samples", type=int, default=50)
    s.set_defaults(handler=cmd_family, default_format="csv")

    s = sub.add_parser("es", parents=[common], help="one Euler solution")
    s.add_argument("--r2", type=float, required=True)
    s.add_argument("--m3", type=float, required=True)
    s.set_defaults(handler=cmd_es, default_format="json")

    s = sub.add_parser("lagrange", parents=[common], help="Lagrange points of a two-primary pair")
    s.add_argument("--x", type=float, required=True)
    s.set_defaults(handler=cmd_lagrange, default_format="json")

    s = sub.add_parser("el", parents=[common], help="the six Euler-Lagrange points")
    s.add_argument("--r2", type=float, required=True)
    s.add_argument("--m3", type=float, required=True)
    s.set_defaults(handler=cmd_el, default_format="json")

    s = sub.add_parser("curve", parents=[common], help="trace the q3 = q4 locus")
    s.add_argument("--r2", type=float, required=True)
    s.add_argument("--step", type=float, default=0.01)
    s.add_argument("--max-points", type=int, default=20_000)
    s.set_defaults(handler=cmd_curve, default_format="csv")

    s = sub.add_parser("param", parents=[common], help="the G(w) parametrization")
    s.add_argument("--w", type=float)
    s.add_argument("--w-min", type=float)
    s.add_argument("--w-max", type=float)
    s.add_argument("--samples", type=int, default=50)
    s.set_defaults(handler=cmd_param, default_format="csv")

    s = sub.add_parser("verify", parents=[common], help="check a solution from first principles")
    s.add_argument("--r2", type=float)
    s.add_argument("--m3", type=float)
    s.add_argument("--from-json", default=None, help="read the solution from `es` output")
    s.add_argument("--r4", type=float)
    s.add_argument("--r5", type=float)
    s.add_argument("--integrate", action="store_true")
    s.add_argument("--periods", type=float, default=1.0)
    s.add_argument("--dt-div", type=int, default=4096)
    s.set_defaults(handler=cmd_verify, default_format="json")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.format is None:
        args.format = args.default_format
    del args.default_format
    handler = args.handler
    del args.handler

    t0 = time.perf_counter()
    try:
        payload = handler(args)
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(payload)
        else:
            sys.stdout.write(payload)
            sys.stdout.flush()
    except BrokenPipeError:
        # reader went away (e.g. piped into head); nothing left to report
        sys.stdout = open(os.devnull, "w")
        return 0
    except (InputError, OSError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"{PROG}: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    if not args.quiet:
        print(f"{PROG} {args.command}: done in {time.perf_counter() - t0:.3f} s", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
