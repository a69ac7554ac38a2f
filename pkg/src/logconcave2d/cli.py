"""Command-line front end.

Exit codes: 0 when every checked property holds, 2 when a violation witness
was produced, 1 on usage or input errors.  Output bytes depend only on the
arguments (including ``--seed``), never on ``--jobs`` or timing.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import numpy as np

from . import counterexamples as cx
from .dihedral import (
    dihedral_identity_check, make_dn_shape, quadrature_allowance, w_jacobian_deviation,
)
from .dynamics import (
    area_at, g_derivative, g_value, midpoint_grid, midpoint_scan, property_B_check, sample_logf,
)
from .errors import GeometryError
from .geometry import ConvexPolygon, is_centrally_symmetric, square
from .oracle import (
    E_boundary_curvature_published, E_boundary_slope, E_boundary_value, E_polynomial,
    CornerCaseParams, corner_case_check, edge_case_check, edge_case_family, edge_case_params,
    edge_case_quantities, quadratic_coefficients,
)
from .reduction import additivity_ledger, reduce_pair, terminal_cases
from .sampling import random_F_pair
from .serialize import parse_rational, polygon_from_json, polygon_to_json, rational_str, scalar_json
from .transversal import check_class_F, in_class_F, perturb_to_F

EXIT_OK, EXIT_INPUT, EXIT_VIOLATION = 0, 1, 2

IDENTITY_TOL = 1e-5
JACOBIAN_TOL = 1e-6
LOGCONCAVE_TOL = 1e-7


class InputError(Exception):
    """Bad arguments or malformed input files."""


# ---------------------------------------------------------------- plumbing

def _emit(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _require_json(args) -> None:
    if args.format != "json":
        raise InputError(f"{args.command} only supports --format json")


def _load_pair(path: str) -> tuple[ConvexPolygon, ConvexPolygon]:
    try:
        if path == "-":
            obj = json.load(sys.stdin)
        else:
            with open(path, encoding="utf-8") as fh:
                obj = json.load(fh)
        return polygon_from_json(obj["K"]), polygon_from_json(obj["L"])
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from exc
    except (KeyError, TypeError) as exc:
        raise InputError(f"expected an object with keys 'K' and 'L' in {path}") from exc
    except GeometryError as exc:
        raise InputError(f"invalid polygon in {path}: {exc}") from exc


def _rational_arg(text: str) -> Fraction:
    try:
        value = parse_rational(text)
    except (ValueError, ZeroDivisionError, GeometryError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _diagnosis_json(K, L) -> dict:
    d = check_class_F(K, L)
    return {
        "in_class": d.in_class,
        "crossings": len(d.crossings),
        "violations": [{"kind": v.kind, "location": [rational_str(v.location.x), rational_str(v.location.y)]}
                       for v in d.violations],
    }


def _midpoint_json(witnesses) -> list[dict]:
    return [dict(w.to_json(), violated=w.violated) for w in witnesses]


# ---------------------------------------------------------------- check-pair

def cmd_check_pair(args) -> int:
    K, L = _load_pair(args.input)
    if not args.allow_asymmetric:
        for name, P in (("K", K), ("L", L)):
            if not is_centrally_symmetric(P):
                raise InputError(f"{name} is not centrally symmetric (use --allow-asymmetric)")
    diagnosis = _diagnosis_json(K, L)
    perturbed = False
    if not diagnosis["in_class"]:
        if args.perturb is None:
            raise InputError("pair is not transversal; pass --perturb EPS to perturb it")
        try:
            K, L = perturb_to_F(K, L, args.perturb)
        except GeometryError as exc:
            raise InputError(str(exc)) from exc
        perturbed = True
    try:
        report = property_B_check(K, L)
    except GeometryError as exc:
        raise InputError(f"property B is undefined for this pair: {exc}") from exc
    witnesses = midpoint_scan(K, L, midpoint_grid(K, L, args.triples))
    violated = (not report.holds) or any(w.violated for w in witnesses)

    if args.format == "csv":
        rows = [[rational_str(w.q), rational_str(w.r), rational_str(w.F_q), rational_str(w.F_qr),
                 rational_str(w.F_qr2), rational_str(w.defect), int(w.violated)] for w in witnesses]
        _emit(args, _csv(["q", "r", "F_q", "F_qr", "F_qr2", "defect", "violated"], rows))
    else:
        _emit(args, _dump({
            "K": polygon_to_json(K),
            "L": polygon_to_json(L),
            "perturbed": perturbed,
            "class_F": diagnosis,
            "property_B": report.to_json(),
            "midpoint": _midpoint_json(witnesses),
            "violation": violated,
        }))
    return EXIT_VIOLATION if violated else EXIT_OK


# ---------------------------------------------------------------- scan-random

def _scan_one(task) -> dict:
    index, K, L, triples = task
    report = property_B_check(K, L)
    witnesses = midpoint_scan(K, L, midpoint_grid(K, L, triples))
    worst = min((w.defect for w in witnesses), default=None)
    return {
        "index": index,
        "K": polygon_to_json(K),
        "L": polygon_to_json(L),
        "property_B": report.to_json(),
        "midpoint_triples": len(witnesses),
        "midpoint_min_defect": scalar_json(worst) if worst is not None else None,
        "violation": (not report.holds) or any(w.violated for w in witnesses),
    }


def cmd_scan_random(args) -> int:
    if args.count < 0:
        raise InputError("--count must be non-negative")
    rng = random.Random(args.seed)
    tasks = []
    for i in range(args.count):
        K, L = random_F_pair(rng, args.vertices)
        tasks.append((i, K, L, args.triples))
    if args.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            records = list(pool.map(_scan_one, tasks, chunksize=8))
    else:
        records = [_scan_one(t) for t in tasks]
    violations = sum(r["violation"] for r in records)

    if args.format == "csv":
        rows = [[r["index"], r["property_B"]["lhs"]["exact"], r["property_B"]["rhs"]["exact"],
                 int(r["property_B"]["holds"]),
                 r["midpoint_min_defect"]["exact"] if r["midpoint_min_defect"] else "",
                 int(r["violation"])] for r in records]
        _emit(args, _csv(["index", "lhs", "rhs", "property_B_holds", "midpoint_min_defect", "violation"],
                         rows))
    else:
        _emit(args, _dump({
            "summary": {"count": args.count, "seed": args.seed, "vertices": args.vertices,
                        "violations": violations},
            "pairs": records,
        }))
    return EXIT_VIOLATION if violations else EXIT_OK


# ---------------------------------------------------------------- reduce

def _slab_json(slab) -> dict | None:
    if slab is None:
        return None
    return {"normal": [rational_str(slab.normal.dx), rational_str(slab.normal.dy)],
            "halfwidth": scalar_json(slab.halfwidth)}


def cmd_reduce(args) -> int:
    _require_json(args)
    K, L = _load_pair(args.input)
    if not in_class_F(K, L):
        raise InputError("pair is not transversal")
    try:
        pairs = reduce_pair(K, L)
        terminals = terminal_cases(K, L)
    except GeometryError as exc:
        raise InputError(str(exc)) from exc
    ledger = additivity_ledger(K, L, pairs)
    closed = [in_class_F(p.K_ext, p.L_ext) for p in pairs]
    ok = ledger.g_balanced and ledger.gprime_balanced and all(closed)
    _emit(args, _dump({
        "extended_pairs": [{
            "K_ext": polygon_to_json(p.K_ext),
            "L_ext": polygon_to_json(p.L_ext),
            "strip_used": _slab_json(p.strip_used),
            "source_component": p.source_component,
            "in_class_F": c,
        } for p, c in zip(pairs, closed)],
        "ledger": {
            "g_total": rational_str(ledger.g_total),
            "g_parts": [rational_str(x) for x in ledger.g_parts],
            "g_balanced": ledger.g_balanced,
            "gprime_total": rational_str(ledger.gprime_total),
            "gprime_parts": [rational_str(x) for x in ledger.gprime_parts],
            "gprime_balanced": ledger.gprime_balanced,
        },
        "terminal_cases": [{"case": t.case, "det_T": scalar_json(t.det_T), "path": list(t.path),
                            "L": polygon_to_json(t.L)} for t in terminals],
    }))
    return EXIT_OK if ok else EXIT_VIOLATION


# ---------------------------------------------------------------- oracle-grid

def _corner_grid(n: int):
    step = Fraction(2, n + 1)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            a, b = i * step, j * step
            for k in range(1, n + 1):
                yield a, b, 4 - a * b + a * b * Fraction(k, n + 1)


def _corner_records(n: int):
    records = []
    for a, b, S in _corner_grid(n):
        verdict = corner_case_check(CornerCaseParams(a, b, S))
        records.append({
            "params": {"a": scalar_json(a), "b": scalar_json(b), "S": scalar_json(S)},
            "E": scalar_json(E_polynomial(a, b, S)),
            "verdict": verdict.holds,
        })
    # boundary identities at S = 4 - ab are informational: they test displayed
    # formulas, not the inequality itself
    identities = {"value": 0, "slope": 0, "curvature": 0, "points": 0}
    step = Fraction(2, n + 1)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            a, b = i * step, j * step
            v, d1, d2 = quadratic_coefficients(lambda S: E_polynomial(a, b, S), 4 - a * b)
            identities["points"] += 1
            identities["value"] += v == E_boundary_value(a, b)
            identities["slope"] += d1 == E_boundary_slope(a, b)
            identities["curvature"] += d2 == E_boundary_curvature_published(a, b)
    return records, {"boundary_identity_matches": identities}


def _edge_records(n: int):
    Q = square()
    records = []
    mismatches = 0
    for L in edge_case_family(n):
        p = edge_case_params(L)
        verdict = edge_case_check(p)
        closed = edge_case_quantities(p)
        direct = (g_value(Q, L), g_derivative(Q, L), area_at(Q, L, 1))
        match = closed == direct
        mismatches += not match
        records.append({
            "params": {"c": scalar_json(p.c), "d": scalar_json(p.d), "cot_alpha": scalar_json(p.cot_alpha),
                       "cot_beta": scalar_json(p.cot_beta), "area_L": scalar_json(p.area_L)},
            "lhs": scalar_json(verdict.lhs),
            "rhs": scalar_json(verdict.rhs),
            "branch": verdict.branch,
            "verdict": verdict.holds and match,
            "closed_forms_match": match,
        })
    return records, {"closed_form_mismatches": mismatches}


def cmd_oracle_grid(args) -> int:
    if args.grid_density < 1:
        raise InputError("--grid-density must be positive")
    if args.case == "corner":
        records, extra = _corner_records(args.grid_density)
    else:
        records, extra = _edge_records(args.grid_density)
    failures = sum(not r["verdict"] for r in records)
    summary = dict({"case": args.case, "grid_density": args.grid_density, "points": len(records),
                    "holds": len(records) - failures, "failures": failures}, **extra)
    if args.format == "csv":
        keys = list(records[0]["params"]) if records else []
        rows = [[r["params"][k]["exact"] for k in keys] + [int(r["verdict"])] for r in records]
        _emit(args, _csv(keys + ["verdict"], rows))
    else:
        lines = [json.dumps(r, separators=(",", ":")) for r in records]
        lines.append(json.dumps({"summary": summary}, separators=(",", ":")))
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_VIOLATION if failures else EXIT_OK


# ---------------------------------------------------------------- dihedral-verify

def cmd_dihedral_verify(args) -> int:
    if args.steps < 3:
        raise InputError("--steps must be at least 3")
    if not args.t_min < args.t_max:
        raise InputError("--t-min must be below --t-max")
    try:
        K = make_dn_shape(args.profile, args.n, args.samples, args.eps)
        L = make_dn_shape(args.profile_L, args.n, args.samples, args.eps)
    except (GeometryError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    ts = np.linspace(args.t_min, args.t_max, args.steps)
    report = dihedral_identity_check(K, L, ts, intervals=args.samples)
    sd = report.log_second_differences()
    allowance = quadrature_allowance(K, L, ts, intervals=args.samples)
    jac = [w_jacobian_deviation(S) for S in (K, L)]
    jac_rel = max(dev / base for dev, base in jac)
    threshold = LOGCONCAVE_TOL + allowance
    summary = {
        "n": args.n, "eps": args.eps, "samples": args.samples,
        "max_dev_sector": report.max_dev_sector,
        "max_dev_w": report.max_dev_w,
        "identity_tolerance": IDENTITY_TOL,
        "jacobian_relative_deviation": jac_rel,
        "jacobian_tolerance": JACOBIAN_TOL,
        "max_second_difference": max(sd),
        "quadrature_allowance": allowance,
        "second_difference_threshold": threshold,
    }
    summary["identity_ok"] = bool(max(report.max_dev_sector, report.max_dev_w) < IDENTITY_TOL)
    summary["jacobian_ok"] = bool(jac_rel < JACOBIAN_TOL)
    summary["log_concave_ok"] = bool(max(sd) <= threshold)
    holds = summary["identity_ok"] and summary["jacobian_ok"] and summary["log_concave_ok"]
    summary["holds"] = holds

    logf = [math.log(f) for f in report.full]
    second = [None] + sd + [None]
    if args.format == "csv":
        rows = [[f"{t:.17g}", f"{f:.17g}", f"{lf:.17g}", "" if s is None else f"{s:.17g}"]
                for t, f, lf, s in zip(report.t, report.full, logf, second)]
        _emit(args, _csv(["t", "f", "logf", "second_difference"], rows))
        sys.stderr.write(_dump(summary))
    else:
        rows = [{"t": t, "f": f, "logf": lf, "second_difference": s}
                for t, f, lf, s in zip(report.t, report.full, logf, second)]
        _emit(args, _dump({"rows": rows, "summary": summary}))
    return EXIT_OK if holds else EXIT_VIOLATION


# ---------------------------------------------------------------- counterexamples

def cmd_counterexamples(args) -> int:
    _require_json(args)
    K, L = cx.uniform_counterexample()
    uniform = cx.certify_uniform_violation()
    mc = cx.monte_carlo_defect(K, L, uniform.scales, samples=args.mc_samples, seed=args.seed)
    R = cx.symmetrized_rectangle()
    control = sum(cx.midpoint_logconcavity_check(R, L, q, r).violated
                  for q in cx.Q_GRID for r in cx.R_GRID)
    quasi = cx.certify_quasiconcave_violation()
    _emit(args, _dump({
        "uniform": dict(uniform.to_json(),
                        K=polygon_to_json(K), L=polygon_to_json(L),
                        monte_carlo={"defect": mc.defect, "stderr": mc.stderr, "sigmas": mc.sigmas,
                                     "samples": mc.samples, "seed": args.seed},
                        symmetrized_control={"K": polygon_to_json(R), "grid_triples":
                                             len(cx.Q_GRID) * len(cx.R_GRID), "violations": control}),
        "quasi_concave": quasi.to_json(),
    }))
    return EXIT_VIOLATION


# ---------------------------------------------------------------- plot-data

def cmd_plot_data(args) -> int:
    if args.input is None:
        K, L = cx.uniform_counterexample()
    else:
        K, L = _load_pair(args.input)
    if args.steps < 3 or not args.t_min < args.t_max:
        raise InputError("need --steps >= 3 and --t-min < --t-max")
    sampled = sample_logf(K, L, args.t_min, args.t_max, args.steps)
    if args.format == "csv":
        _emit(args, sampled.to_csv())
    else:
        _emit(args, _dump({"meta": sampled.meta, "entries": [list(e) for e in sampled.entries]}))
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for all randomness (default 0)")
    common.add_argument("--output", "-o", help="write to this file instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--jobs", type=int, default=1, help="worker processes (output is unaffected)")

    parser = argparse.ArgumentParser(prog="logconcave2d",
                                     description="Log-concavity of |e^t K ∩ L| for symmetric plane shapes.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-pair", parents=[common], help="property B and midpoint scan for one pair")
    p.add_argument("input", help='JSON file {"K": polygon, "L": polygon}, or - for stdin')
    p.add_argument("--allow-asymmetric", action="store_true")
    p.add_argument("--perturb", type=_rational_arg, metavar="EPS",
                   help="scale L to make the pair transversal if needed")
    p.add_argument("--triples", type=int, default=9, help="midpoint triples (default 9)")
    p.set_defaults(func=cmd_check_pair)

    p = sub.add_parser("scan-random", parents=[common], help="random symmetric pairs")
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--vertices", type=int, default=4, help="random support points per polygon")
    p.add_argument("--triples", type=int, default=9)
    p.set_defaults(func=cmd_scan_random)

    p = sub.add_parser("reduce", parents=[common], help="extended pairs, g-ledger and terminal cases")
    p.add_argument("input")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("oracle-grid", parents=[common], help="closed-form checks of the terminal cases")
    p.add_argument("--case", choices=("edge", "corner"), required=True)
    p.add_argument("--grid-density", type=int, default=16)
    p.set_defaults(func=cmd_oracle_grid)

    p = sub.add_parser("dihedral-verify", parents=[common], help="three-way area identity for D_n shapes")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--profile", default="1+eps*cos(n*theta)", help="radial profile of K")
    p.add_argument("--profile-L", default="1-eps*cos(n*theta)", help="radial profile of L")
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--t-min", type=float, default=-0.5)
    p.add_argument("--t-max", type=float, default=0.5)
    p.add_argument("--steps", type=int, default=21)
    p.add_argument("--samples", type=int, default=2048)
    p.set_defaults(func=cmd_dihedral_verify)

    p = sub.add_parser("counterexamples", parents=[common], help="certify both negative examples")
    p.add_argument("--mc-samples", type=int, default=cx.MC_SAMPLES)
    p.set_defaults(func=cmd_counterexamples)

    p = sub.add_parser("plot-data", parents=[common], help="(t, log f) samples")
    p.add_argument("input", nargs="?", help="pair JSON (default: the uniform counterexample)")
    p.add_argument("--t-min", type=float, default=-0.5)
    p.add_argument("--t-max", type=float, default=0.5)
    p.add_argument("--steps", type=int, default=101)
    p.set_defaults(func=cmd_plot_data)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.jobs < 1:
        sys.stderr.write("error: --jobs must be at least 1\n")
        return EXIT_INPUT
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
