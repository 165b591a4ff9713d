"""Command-line front end.

Subcommands mirror the library layers: ``classify``, ``hopf-surface``,
``lyapunov``, ``find-codim2``, ``tables``, ``simulate`` and
``verify-direction``.  All numeric output uses 17 significant digits so
CSV rows round-trip exactly; ``--format json`` switches every
subcommand to JSON.  ``HOPFX_THREADS`` caps the worker count used when
scanning grids.

Exit codes: 0 success, 1 usage error, 2 domain error, 3 numerical
failure, 4 golden-table mismatch.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .ddesim import detect_attractor, integrate, verify_direction
from .errors import DomainError, NumericalError
from .lyapunov import lyapunov_at
from .model import Parameters
from .search import (GridSpec, PAPER_GRID, bisect_codim2,
                     bracket_l1_sign_change, check_against_published,
                     reproduce_tables)
from .stability import classify, hopf_delay, hopf_surface_mesh

__all__ = ["main", "run"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_NUMERICAL = 3
EXIT_TABLE_MISMATCH = 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse variant that raises instead of calling sys.exit(2)."""

    def error(self, message):
        raise _UsageError(message)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def _emit(lines: Iterable[str], output: Optional[str]) -> None:
    text = "\n".join(lines) + "\n"
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(obj, output: Optional[str]) -> None:
    _emit([json.dumps(obj, indent=2)], output)


def _thread_count() -> int:
    raw = os.environ.get("HOPFX_THREADS", "1")
    try:
        cnt = int(raw)
    except ValueError:
        raise _UsageError(f"HOPFX_THREADS must be an integer, got {raw!r}")
    if cnt < 1:
        raise _UsageError("HOPFX_THREADS must be >= 1")
    return cnt


def _map_cells(fn: Callable, items: Sequence):
    workers = _thread_count()
    if workers == 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--output", default=None)


def _param_args(sub: argparse.ArgumentParser, with_r: bool) -> None:
    sub.add_argument("--n", type=float, required=True)
    sub.add_argument("--beta0", type=float, required=True)
    sub.add_argument("--delta", type=float, required=True)
    sub.add_argument("--k", type=float, required=True)
    if with_r:
        sub.add_argument("--r", type=float, required=True)


def build_parser() -> _Parser:
    parser = _Parser(prog="hopfx",
                     description="Hopf analysis of the delayed "
                                 "hematopoiesis model")
    subs = parser.add_subparsers(dest="command", required=True)

    s = subs.add_parser("classify", parents=[], help="stability of x2")
    _param_args(s, with_r=True)
    _add_common(s)

    s = subs.add_parser("hopf-surface", help="critical delay over a grid")
    s.add_argument("--n", type=float, required=True)
    s.add_argument("--beta0", type=float, required=True)
    s.add_argument("--k-min", type=float, required=True)
    s.add_argument("--k-max", type=float, required=True)
    s.add_argument("--k-steps", type=int, required=True)
    s.add_argument("--delta-min", type=float, required=True)
    s.add_argument("--delta-max", type=float, required=True)
    s.add_argument("--delta-steps", type=int, required=True)
    _add_common(s)

    s = subs.add_parser("lyapunov", help="Lyapunov coefficients at the "
                                         "Hopf point")
    _param_args(s, with_r=False)
    s.add_argument("--l2", action="store_true", help="also compute l2")
    _add_common(s)

    s = subs.add_parser("find-codim2", help="bisect to an l1 = 0 point")
    s.add_argument("--n", type=float, required=True)
    s.add_argument("--beta0", type=float, required=True)
    s.add_argument("--k", type=float, required=True)
    s.add_argument("--delta-lo", type=float, default=None)
    s.add_argument("--delta-hi", type=float, default=None)
    s.add_argument("--tol", type=float, default=1e-10)
    _add_common(s)

    s = subs.add_parser("tables", help="reproduce the published "
                                       "degenerate-Hopf tables")
    s.add_argument("--preset", choices=("paper",), default="paper")
    s.add_argument("--grid", default=None,
                   help="JSON file overriding the grid preset")
    s.add_argument("--check", action="store_true",
                   help="compare n = 2 rows against the published values")
    s.add_argument("--tol", type=float, default=1e-10)
    _add_common(s)

    s = subs.add_parser("simulate", help="integrate the delay equation")
    _param_args(s, with_r=True)
    s.add_argument("--offset", type=float, required=True)
    s.add_argument("--tmax", type=float, required=True)
    s.add_argument("--steps-per-delay", type=int, default=200)
    _add_common(s)

    s = subs.add_parser("verify-direction",
                        help="simulation check of sign(l1)")
    _param_args(s, with_r=False)
    s.add_argument("--offsets", required=True,
                   help="comma-separated delay increments")
    s.add_argument("--steps-per-delay", type=int, default=150)
    s.add_argument("--horizon-delays", type=float, default=1500.0)
    _add_common(s)

    return parser


def _cmd_classify(args) -> int:
    params = Parameters(beta0=args.beta0, n=args.n, delta=args.delta,
                        k=args.k, r=args.r)
    v = classify(params)
    lo, hi = v.stable_r_window if v.stable_r_window else (None, None)
    if args.format == "json":
        _emit_json({
            "case": v.case_label,
            "asymptotically_stable": v.asymptotically_stable,
            "stable_r_window": None if lo is None else [lo, hi],
            "omega0": v.omega0, "B1": v.B1, "p": v.p, "q": v.q,
            "flag": v.flag,
        }, args.output)
    else:
        header = "case,asymptotically_stable,r_lo,r_hi,omega0,B1,p,q,flag"
        row = ",".join(_fmt(x) for x in (
            v.case_label, v.asymptotically_stable, lo, hi, v.omega0,
            v.B1, v.p, v.q, v.flag or ""))
        _emit([header, row], args.output)
    return EXIT_OK


def _cmd_hopf_surface(args) -> int:
    for name, steps in (("k-steps", args.k_steps),
                        ("delta-steps", args.delta_steps)):
        if steps < 1:
            raise _UsageError(f"--{name} must be >= 1")
    k_grid = np.linspace(args.k_min, args.k_max, args.k_steps)
    d_grid = np.linspace(args.delta_min, args.delta_max, args.delta_steps)
    mesh = hopf_surface_mesh(args.n, args.beta0, k_grid, d_grid)
    if args.format == "json":
        _emit_json([{"k": k, "delta": d, "r": r, "omega": w}
                    for k, d, r, w in mesh], args.output)
    else:
        lines = ["k,delta,r,omega"]
        lines += [",".join(_fmt(v) for v in rec) for rec in mesh]
        _emit(lines, args.output)
    return EXIT_OK


def _cmd_lyapunov(args) -> int:
    params = Parameters(beta0=args.beta0, n=args.n, delta=args.delta,
                        k=args.k)
    rep = lyapunov_at(params, want_l2=args.l2)
    h = rep.hopf
    if args.format == "json":
        _emit_json({
            "n": args.n, "beta0": args.beta0, "k": args.k,
            "delta": args.delta, "r_star": h.params.r,
            "omega_star": h.omega_star, "x2": h.x2,
            "l1": rep.l1, "l2": rep.l2, "criticality": rep.criticality,
            "coefficients": rep.g.to_json_dict(),
        }, args.output)
    else:
        header = ("n,beta0,k,delta,r_star,omega_star,x2,l1,l2,criticality")
        row = ",".join(_fmt(v) for v in (
            args.n, args.beta0, args.k, args.delta, h.params.r,
            h.omega_star, h.x2, rep.l1, rep.l2, rep.criticality))
        _emit([header, row], args.output)
    return EXIT_OK


def _cmd_find_codim2(args) -> int:
    from .search import Codim2Record
    if (args.delta_lo is None) != (args.delta_hi is None):
        raise _UsageError("--delta-lo and --delta-hi go together")
    if args.delta_lo is None:
        br = bracket_l1_sign_change(args.n, args.beta0, args.k)
        if br is None:
            raise DomainError(
                "no sign change of l1 along the Hopf frontier for "
                f"n={args.n}, beta0={args.beta0}, k={args.k}")
        lo, hi = br
    else:
        lo, hi = args.delta_lo, args.delta_hi
    try:
        rec = bisect_codim2(args.n, args.beta0, args.k, lo, hi,
                            tol_l1=args.tol)
    except ValueError as exc:
        raise _UsageError(str(exc))
    if args.format == "json":
        _emit_json(rec.to_dict(), args.output)
    else:
        _emit([Codim2Record.CSV_HEADER, rec.csv_row()], args.output)
    return EXIT_OK


def _cmd_tables(args) -> int:
    from .search import Codim2Record
    grid = PAPER_GRID
    if args.grid is not None:
        with open(args.grid) as fh:
            grid = GridSpec.from_dict(json.load(fh))

    def cell(key):
        n, beta0, k = key
        br = bracket_l1_sign_change(n, beta0, k, grid)
        if br is None:
            return (key, None)
        return (key, bisect_codim2(n, beta0, k, br[0], br[1], args.tol))

    keys = [(n, b0, k) for n in grid.n_values
            for b0 in grid.beta0_values for k in grid.k_values]
    results = _map_cells(cell, keys)
    records = sorted((rec for _, rec in results
                      if rec is not None and rec.n != 1.5),
                     key=lambda r: (r.n, r.beta0, r.k))
    n15 = sorted((rec for _, rec in results
                  if rec is not None and rec.n == 1.5),
                 key=lambda r: (r.beta0, r.k))
    no_codim2 = sorted(key for key, rec in results if rec is None)

    issues = check_against_published(records) if args.check else []

    if args.format == "json":
        _emit_json({
            "records": [r.to_dict() for r in records],
            "n15_records": [r.to_dict() for r in n15],
            "no_codim2": [list(c) for c in no_codim2],
            "check_issues": issues,
        }, args.output)
    else:
        lines = [Codim2Record.CSV_HEADER]
        lines += [r.csv_row() for r in records]
        if n15:
            lines.append("# n = 1.5 rows (delays far beyond the "
                         "physiological range):")
            lines += ["# " + r.csv_row() for r in n15]
        if no_codim2:
            lines.append(f"# {len(no_codim2)} cells with no l1 sign change "
                         "along the Hopf frontier:")
            by_n: dict[float, int] = {}
            for n, _, _ in no_codim2:
                by_n[n] = by_n.get(n, 0) + 1
            lines += [f"#   n={n}: {cnt} cells"
                      for n, cnt in sorted(by_n.items())]
        if args.check:
            lines.append(f"# golden check: {len(issues)} mismatches")
        _emit(lines, args.output)

    if issues:
        for issue in issues:
            print(issue, file=sys.stderr)
        return EXIT_TABLE_MISMATCH
    return EXIT_OK


def _cmd_simulate(args) -> int:
    params = Parameters(beta0=args.beta0, n=args.n, delta=args.delta,
                        k=args.k, r=args.r)
    traj = integrate(params, args.offset, args.tmax,
                     steps_per_delay=args.steps_per_delay)
    if args.format == "json":
        _emit_json({"t": [float(v) for v in traj.t],
                    "x": [float(v) for v in traj.x]}, args.output)
    else:
        _emit(traj.csv_lines(), args.output)
    return EXIT_OK


def _cmd_verify_direction(args) -> int:
    try:
        offsets = [float(tok) for tok in args.offsets.split(",") if tok]
    except ValueError:
        raise _UsageError(f"bad --offsets value: {args.offsets!r}")
    params = Parameters(beta0=args.beta0, n=args.n, delta=args.delta,
                        k=args.k)
    rep = lyapunov_at(params)
    sign = -1 if rep.l1 < 0 else 1
    dr = verify_direction(params, rep.hopf.params.r, sign, offsets,
                          steps_per_delay=args.steps_per_delay,
                          horizon_delays=args.horizon_delays)
    out = dr.to_dict()
    out["l1"] = rep.l1
    out["r_hopf"] = rep.hopf.params.r
    _emit_json(out, args.output)  # always JSON: nested report
    return EXIT_OK


_DISPATCH = {
    "classify": _cmd_classify,
    "hopf-surface": _cmd_hopf_surface,
    "lyapunov": _cmd_lyapunov,
    "find-codim2": _cmd_find_codim2,
    "tables": _cmd_tables,
    "simulate": _cmd_simulate,
    "verify-direction": _cmd_verify_direction,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _DISPATCH[args.command](args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
