"""Command-line front end.

    tensor-radius norm --kind nuclear --op H.json
    tensor-radius radius tau --op H.json --kmax 4
    tensor-radius radius rho --space l1.json
    tensor-radius ellipsoid --space hexagon.json
    tensor-radius bm --space l4.json
    tensor-radius reproduce example-1.5 --json

Exit codes: 0 success, 1 golden mismatch, 2 bad input, 3 size cap exceeded,
4 no convergence, 5 other library errors (unsupported, not certifiable).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
import time
from fractions import Fraction

import numpy as np

from ._exact import Surd
from .ellipsoids import bm_distance_euclidean, contact_points, identity_decomposition, john, loewner
from .errors import DimensionCapExceeded, NoConvergence, SizeCapExceeded, TensorRadiusError
from .operators import LinearOperator, nuclear_norm, operator_norm
from .radius import ntp_gap, rho_report, tau_infty_bounds
from .spaces import space_from_json
from .suites import SUITES, format_exact, run_suite
from .tensors import Tensor, hs_norm, injective_norm, projective_norm

EXIT_MISMATCH, EXIT_INPUT, EXIT_CAP, EXIT_CONVERGENCE, EXIT_OTHER = 1, 2, 3, 4, 5


class InputError(Exception):
    pass


def _load(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _rationalize(obj, rational: bool):
    """With ``--rational`` every float in the input is read as its exact binary value."""
    if not rational:
        return obj
    if isinstance(obj, float):
        return str(Fraction(obj))
    if isinstance(obj, list):
        return [_rationalize(v, rational) for v in obj]
    if isinstance(obj, dict):
        return {k: (_rationalize(v, rational) if k in ("coeffs", "matrix", "vertices", "facets") else v) for k, v in obj.items()}
    return obj


def _parse(kind: str, path: str, rational: bool):
    raw = _load(path)
    try:
        if kind == "space":
            return space_from_json(_rationalize(raw, rational)), raw
        if kind == "tensor":
            return Tensor.from_json(_rationalize(raw, rational)), raw
        return LinearOperator.from_json(_rationalize(raw, rational)), raw
    except TensorRadiusError as exc:
        if isinstance(exc, (SizeCapExceeded, DimensionCapExceeded)):
            raise
        raise InputError(f"{path}: {exc}") from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _digest(raw_inputs: list) -> str:
    blob = json.dumps(raw_inputs, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _vector(v):
    if v is None:
        return None
    arr = np.asarray(v)
    if arr.dtype == object:
        return [str(x) for x in arr.ravel()]
    return [float(x) for x in arr.ravel()]


def _exact_str(v):
    if isinstance(v, (Fraction, Surd)):
        return format_exact(v)
    return None


def _row(name, value=None, certified=True, exact=None, lower=None, upper=None, witness=None, **extra) -> dict:
    row = {"name": name}
    if value is not None:
        row["value"] = float(value)
    if lower is not None:
        row["lower"] = float(lower)
        row["upper"] = float(upper)
    if exact is not None:
        row["exact"] = exact
    row["certified"] = bool(certified)
    row["label"] = "certified" if certified else "heuristic"
    if witness is not None:
        row["witness"] = witness
    row.update(extra)
    return row


# ---------------------------------------------------------------------------
# Subcommands


def cmd_norm(args) -> tuple[list, list, int]:
    kind = args.kind
    if kind in ("injective", "projective", "hs"):
        if not args.tensor:
            raise InputError("--tensor is required for this kind")
        z, raw = _parse("tensor", args.tensor, args.rational)
        if kind == "injective":
            r = injective_norm(z, starts=args.starts, seed=args.seed)
            rows = [_row("injective", r.value, r.certified, _exact_str(r.value), method=r.method, witness=[_vector(v) for v in r.witness.functionals] if r.witness else None)]
        elif kind == "projective":
            r = projective_norm(z, tol=args.tol, starts=args.starts, seed=args.seed)
            rows = [_row("projective", r.value, r.certified, _exact_str(r.value), lower=r.lower, upper=r.value, method=r.method, witness=_vector(r.dual))]
        else:
            rows = [_row("hs", hs_norm(z), True)]
        return rows, [raw], 0
    if not args.op:
        raise InputError("--op is required for this kind")
    T, raw = _parse("op", args.op, args.rational)
    if kind == "operator":
        r = operator_norm(T, starts=args.starts, seed=args.seed)
        rows = [_row("operator", r.value, r.certified, _exact_str(r.value), method=r.method, witness=_vector(r.witness))]
    else:
        r = nuclear_norm(T, tol=args.tol, starts=args.starts, seed=args.seed)
        rows = [_row("nuclear", r.value, r.certified, _exact_str(r.value), lower=r.lower, upper=r.value, method=r.method)]
    return rows, [raw], 0


def _bound_row(name, interval) -> dict:
    lo, up = interval.lower, interval.upper
    row = _row(
        name,
        interval.value,
        interval.certified,
        _exact_str(up.exact) if interval.collapsed and up.exact is not None else None,
        lower=lo.value,
        upper=up.value,
        lower_source=lo.source,
        upper_source=up.source,
    )
    if interval.value is None:
        row.pop("value", None)
    return row


def cmd_radius(args) -> tuple[list, list, int]:
    if args.quantity == "rho":
        if not args.space:
            raise InputError("--space is required for rho")
        X, raw = _parse("space", args.space, args.rational)
        rep = rho_report(X, kmax=args.kmax, starts=args.starts, seed=args.seed)
        name = "rho"
    else:
        if not args.op:
            raise InputError("--op is required for tau and gap")
        T, raw = _parse("op", args.op, args.rational)
        if args.quantity == "gap":
            g = ntp_gap(T)
            row = _row("ntp_gap", None, True, None, lower=g.tau_upper, upper=g.nuclear, gap_certified=g.gap_certified, source=g.source)
            row["tau_upper"] = row.pop("lower")
            row["nuclear"] = row.pop("upper")
            return [row], [raw], 0
        rep = tau_infty_bounds(T, kmax=args.kmax, starts=args.starts, seed=args.seed)
        name = "tau"
    rows = [_bound_row(f"{name}_infty", rep.interval)]
    for r in rep.per_k:
        rows.append(_row(f"{name}_{r.k}", r.value, r.certified, _exact_str(r.exact), method=r.method))
    for b in rep.bounds:
        rows.append(_row(f"bound:{b.source}", b.value, b.certified, _exact_str(b.exact)))
    return rows, [raw], 0


def cmd_ellipsoid(args) -> tuple[list, list, int]:
    X, raw = _parse("space", args.space, args.rational)
    rows = []
    kinds = ("john", "loewner") if args.kind == "both" else (args.kind,)
    for side in kinds:
        E = john(X) if side == "john" else loewner(X)
        C = contact_points(X, E, side)
        dec = identity_decomposition(C, E)
        rows.append(
            _row(
                side,
                None,
                True,
                None,
                logdet=E.logdet(),
                matrix=[[float(v) for v in row] for row in E.M],
                radius=format_exact(E.radius) if E.radius is not None else None,
                contacts=len(C),
                decomposition_total=dec.total,
            )
        )
    return rows, [raw], 0


def cmd_bm(args) -> tuple[list, list, int]:
    X, raw = _parse("space", args.space, args.rational)
    return [_bound_row("bm_distance", bm_distance_euclidean(X))], [raw], 0


def cmd_reproduce(args) -> tuple[list, list, int]:
    names = list(SUITES) if args.name == "all" else [args.name]
    rows = []
    for name in names:
        for c in run_suite(name, seed=args.seed, starts=args.starts):
            row = _row(c.name, c.observed, c.certified, c.exact, expected=c.expected, status="pass" if c.passed else "FAIL", suite=name)
            rows.append(row)
    code = 0 if all(r["status"] == "pass" for r in rows) else EXIT_MISMATCH
    return rows, [{"suite": args.name}], code


# ---------------------------------------------------------------------------
# Output


def _cell(v) -> str:
    if isinstance(v, float):
        return f"{v:.12g}"
    if v is None:
        return ""
    if isinstance(v, (list, dict)):
        return json.dumps(v)
    return str(v)


TABLE_COLUMNS = (
    "name", "value", "lower", "upper", "exact", "expected", "status", "label", "method",
    "tau_upper", "nuclear", "gap_certified", "radius", "contacts", "decomposition_total",
)


def _columns(rows) -> list[str]:
    present = [c for c in TABLE_COLUMNS if any(c in r for r in rows)]
    return present


def render_text(rows, elapsed: float | None) -> str:
    cols = _columns(rows)
    cells = [[_cell(r.get(c)) for c in cols] for r in rows]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in cells:
        lines.append("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())
    if elapsed is not None:
        lines.append(f"elapsed {elapsed:.2f}s")
    return "\n".join(lines) + "\n"


def render_csv(rows) -> str:
    cols = _columns(rows)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([_cell(r.get(c)) for c in cols])
    return buf.getvalue()


def render_json(command: list[str], inputs: list, rows: list) -> str:
    # no timing here: identical inputs and seed must give identical bytes
    report = {"command": command, "inputs_digest": _digest(inputs), "results": rows}
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# Parser


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="machine-readable report on stdout")
    fmt.add_argument("--csv", action="store_true", help="CSV table on stdout")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1, help="accepted for compatibility; work runs sequentially")
    p.add_argument("--kmax", type=int, default=4)
    p.add_argument("--starts", type=int, default=64)
    p.add_argument("--tol", type=float, default=1e-7)
    p.add_argument("--rational", action="store_true", help="read float entries as exact rationals")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="tensor-radius", description="Tensor radii of operators between finite-dimensional normed spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norm", parents=[common], help="injective, projective, Hilbert-Schmidt, operator or nuclear norm")
    p.add_argument("--kind", required=True, choices=["injective", "projective", "hs", "operator", "nuclear"])
    p.add_argument("--tensor")
    p.add_argument("--op")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("radius", parents=[common], help="tau_infty or rho_infty intervals, or an NTP gap certificate")
    p.add_argument("quantity", choices=["tau", "rho", "gap"])
    p.add_argument("--op")
    p.add_argument("--space")
    p.set_defaults(func=cmd_radius)

    p = sub.add_parser("ellipsoid", parents=[common], help="John and Loewner ellipsoids with contact data")
    p.add_argument("--space", required=True)
    p.add_argument("--kind", choices=["john", "loewner", "both"], default="both")
    p.set_defaults(func=cmd_ellipsoid)

    p = sub.add_parser("bm", parents=[common], help="Banach-Mazur distance to Euclidean space")
    p.add_argument("--space", required=True)
    p.set_defaults(func=cmd_bm)

    p = sub.add_parser("reproduce", parents=[common], help="run a named golden-value suite")
    p.add_argument("name", choices=list(SUITES) + ["all"])
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        rows, inputs, code = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SizeCapExceeded, DimensionCapExceeded) as exc:
        print(f"error: size cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except NoConvergence as exc:
        print(f"error: no convergence: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except TensorRadiusError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_OTHER
    if args.json:
        sys.stdout.write(render_json(argv, inputs, rows))
    elif args.csv:
        sys.stdout.write(render_csv(rows))
    else:
        sys.stdout.write(render_text(rows, time.perf_counter() - start))
    return code


if __name__ == "__main__":
    raise SystemExit(main())
