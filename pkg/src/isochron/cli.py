"""Command-line front end.

Subcommands: ``scan``, ``check``, ``coeffs``, ``oracle``, ``abel`` and
``family eval``.  Tabular output is CSV, everything else JSON; floats are
written with 17 significant digits so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .criteria import isochrony_verdict
from .isochrone_series import DEFAULT_ORDER, b_from_g, g_from_b, odd_from_even
from .oracle import OracleError, SimConfig, simulate_period
from .period import (
    DEFAULT_NODES,
    abel_turning_distance,
    energy_grid,
    period,
    period_scan,
)
from .potentials import DomainError, FamilySpecError, family_from_string, parse_family
from .roots import RootFindingError
from .series import Series, as_rational
from .tables import check_odd_table

EXIT_CODES = {"Isochronous": 0, "Increasing": 1, "Decreasing": 1, "Inconclusive": 2}
EXIT_ERROR = 3
MAX_EVEN = 14
MAX_B = 7


def _f(v) -> str:
    return format(float(v), ".17g")


def _manifest(command: str, args: argparse.Namespace, **extra) -> dict:
    params = {k: v for k, v in sorted(vars(args).items())
              if k not in ("func", "command", "out", "format", "family_cmd") and v is not None}
    doc = {
        "command": command,
        "family": getattr(args, "family", None),
        "parameters": params,
        "seed": None,
        "version": __version__,
    }
    doc.update(extra)
    return doc


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def cmd_scan(args) -> int:
    P = family_from_string(args.family)
    grid = energy_grid(P, args.count, args.c_min, args.c_max)
    table = period_scan(P, grid, args.nodes)
    manifest = _manifest("scan", args, tolerances={"root_xtol": 1e-15, "spread": table.spread_tol})
    if args.format == "json":
        _emit(table.to_json(manifest) + "\n", args.out)
    else:
        _emit(table.to_csv(), args.out)
        if args.out:
            Path(str(args.out) + ".manifest.json").write_text(_json(manifest))
    print(f"monotonicity: {table.monotonicity()} spread={_f(table.spread)}", file=sys.stderr)
    return 0


def cmd_check(args) -> int:
    P = family_from_string(args.family)
    report = isochrony_verdict(P, nodes=args.nodes, order=args.order)
    _emit(report.to_json(_manifest("check", args)) + "\n", args.out)
    return EXIT_CODES[report.verdict]


def _frac_list(values) -> list:
    return [str(v) for v in values]


def _parse_series_arg(text: str, order: int) -> Series:
    spec = parse_family("series:" + text)
    cs = list(spec.g.coeffs)
    if len(cs) - 1 > order:
        raise FamilySpecError(f"series has degree {len(cs) - 1} > order {order}")
    return Series.from_coeffs(cs, order)


def cmd_coeffs(args) -> int:
    order = args.order
    doc: dict = {"mode": args.mode, "order": order}
    status = 0
    if args.mode == "odd-from-even":
        evens = {k: as_rational(getattr(args, f"a{k}")) for k in range(2, MAX_EVEN + 1, 2)
                 if getattr(args, f"a{k}") is not None}
        res = odd_from_even(evens, order)
        doc["a_even"] = {str(k): str(v) for k, v in sorted(evens.items())}
        doc["a_odd"] = {str(k): str(v) for k, v in res.a_odd.items()}
        doc["b"] = _frac_list(res.b_coeffs)
        doc["g"] = _frac_list(res.g_series.coeffs)
        if args.check_paper_table:
            if order < 13:
                raise ValueError("--check-paper-table needs --order >= 13")
            checks = check_odd_table(evens, res.a_odd)
            doc["table_check"] = {str(k): v for k, v in checks.items()}
            status = 0 if all(checks.values()) else 1
    elif args.mode == "g-from-b":
        b = [as_rational(getattr(args, f"b{k}")) for k in range(MAX_B + 1) if getattr(args, f"b{k}") is not None]
        doc["b"] = _frac_list(b)
        doc["g"] = _frac_list(g_from_b(b, order).coeffs)
    else:
        if not args.series:
            raise ValueError("--series is required for b-from-g")
        m = b_from_g(_parse_series_arg(args.series, order))
        doc["b"] = _frac_list(m.b)
        doc["isochronous"] = m.isochronous
        doc["mismatch_order"] = m.mismatch_order
        doc["residual"] = None if m.residual is None else str(m.residual)
    doc["manifest"] = _manifest("coeffs", args)
    _emit(_json(doc), args.out)
    return status


def cmd_oracle(args) -> int:
    P = family_from_string(args.family)
    T_quad = period(P, args.c, args.nodes)
    sim = simulate_period(P, args.c, SimConfig(tol=args.tol))
    doc = {
        "c": args.c,
        "T_quad": T_quad,
        "T_sim": sim.T,
        "difference": sim.T - T_quad,
        "relative_difference": abs(sim.T - T_quad) / T_quad,
        "energy_drift": sim.energy_drift,
        "drift_warning": sim.drift_warning,
        "manifest": _manifest("oracle", args),
    }
    _emit(_json(doc), args.out)
    return 0


def cmd_abel(args) -> int:
    P = family_from_string(args.family)
    lhs, rhs = abel_turning_distance(P, args.c, args.nodes, args.abel_nodes)
    doc = {
        "c": args.c,
        "turning_distance": lhs,
        "abel_integral": rhs,
        "difference": lhs - rhs,
        "isochronous_distance": 2.0 * math.sqrt(2.0 * args.c),
        "manifest": _manifest("abel", args),
    }
    _emit(_json(doc), args.out)
    return 0


def cmd_family_eval(args) -> int:
    P = family_from_string(args.family)
    if args.x:
        xs = np.array([float(v) for v in args.x])
    else:
        lo, hi = args.x_min, args.x_max
        if lo is None or hi is None:
            raise ValueError("give --x values or both --x-min and --x-max")
        xs = np.linspace(lo, hi, args.count)
    if np.any(~P.contains(xs)):
        raise DomainError(f"points outside the domain {P.domain}")
    G, g, dg = P.G(xs), P.g(xs), P.dg(xs)
    if args.format == "json":
        doc = {
            "domain": [P.domain[0], P.domain[1]],
            "cbar": P.cbar,
            "points": [{"x": float(x), "G": float(a), "g": float(b), "dg": float(c)}
                       for x, a, b, c in zip(xs, G, g, dg)],
            "manifest": _manifest("family eval", args),
        }
        _emit(_json(doc), args.out)
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "G", "g", "dg"])
        for row in zip(xs, G, g, dg):
            w.writerow([_f(v) for v in row])
        _emit(buf.getvalue(), args.out)
        if args.out:
            Path(str(args.out) + ".manifest.json").write_text(_json(_manifest("family eval", args)))
    return 0


def _common(p: argparse.ArgumentParser, family: bool = True, fmt: tuple = ("json",)) -> None:
    if family:
        p.add_argument("--family", required=True, help="family spec, e.g. urabe:alpha=0.3")
    p.add_argument("--nodes", type=int, default=DEFAULT_NODES, help="Gauss-Legendre nodes in theta")
    p.add_argument("--order", type=int, default=DEFAULT_ORDER, help="series truncation order")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=fmt, default=fmt[0])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="isochron", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan", help="tabulate T(c) and T'(c)")
    _common(p, fmt=("csv", "json"))
    p.add_argument("--c-min", type=float)
    p.add_argument("--c-max", type=float)
    p.add_argument("--count", type=int, default=50)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("check", help="isochronicity / monotonicity verdict")
    _common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("coeffs", help="exact coefficient recursions")
    _common(p, family=False)
    p.add_argument("--mode", choices=("odd-from-even", "g-from-b", "b-from-g"), required=True)
    for k in range(2, MAX_EVEN + 1, 2):
        p.add_argument(f"--a{k}", metavar="P/Q")
    for k in range(MAX_B + 1):
        p.add_argument(f"--b{k}", metavar="P/Q")
    p.add_argument("--series", help="g coefficients, e.g. a2=0,a3=1")
    p.add_argument("--check-paper-table", action="store_true",
                   help="compare odd coefficients with the published closed forms")
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("oracle", help="quadrature period vs ODE integration")
    _common(p)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-12)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("abel", help="turning-point distance vs Abel integral of T")
    _common(p)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--abel-nodes", type=int, default=64)
    p.set_defaults(func=cmd_abel)

    p = sub.add_parser("family", help="family utilities")
    fsub = p.add_subparsers(dest="family_cmd", required=True)
    e = fsub.add_parser("eval", help="pointwise G, g, g'")
    _common(e, fmt=("csv", "json"))
    e.add_argument("--x", nargs="*", type=float)
    e.add_argument("--x-min", type=float)
    e.add_argument("--x-max", type=float)
    e.add_argument("--count", type=int, default=11)
    e.set_defaults(func=cmd_family_eval)
    return parser


_NEGATIVE_RATIONAL = re.compile(r"^-\d+/\d+$")


def _join_negative_rationals(argv: list) -> list:
    """Rewrite ``--b1 -3/4`` as ``--b1=-3/4``; argparse would take ``-3/4`` for an option."""
    out = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and _NEGATIVE_RATIONAL.match(tok):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _join_negative_rationals(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # usage errors must not collide with the "inconclusive" exit code
        return EXIT_ERROR if exc.code else 0
    try:
        return args.func(args)
    except (FamilySpecError, DomainError, ValueError, ZeroDivisionError,
            RootFindingError, OracleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
