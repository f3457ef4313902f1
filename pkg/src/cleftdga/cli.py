"""Command line front end.

    cleftdga verify    --geometry flat2 --suite all
    cleftdga ricci     --geometry sphere2
    cleftdga quantize  --geometry flat2 --lambda 1
    cleftdga z2
    cleftdga spacetime --geometry flat3

Exit status is 0 when every check passes, 1 when some check fails and 2 on
usage or parse errors.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .coefficients import Jet
from .errors import CalculusError, InvalidMetric, ParseError
from .extension import ClassicalHost, Extension, Extension2, classical_cleft, cocycle_check
from .forms import Form, graded_commutator
from .geometry import BUILTINS, Geometry, load_geometry
from .ncdga import PerpTable, z2_report
from .report import Check, Report
from .riemann import ricci_via_delta
from .suites import (
    SUITES,
    default_tolerance,
    ricci_suite,
    run_suite,
    spacetime_suite,
    z2_extension_suite,
    z2_gauge_suite,
)

__all__ = ["main", "build_parser"]

JET_NOTE = "jet entries are shown by their value at the base point"


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# Formatting
# ---------------------------------------------------------------------------


def format_scalar(c) -> str:
    if isinstance(c, Jet):
        return f"{float(c.value()):.10g}"
    return str(c)


def format_form(f: Form) -> str:
    if f.is_zero():
        return "0"
    names = f.chart.names
    terms = []
    for idx in sorted(f.comps, key=lambda k: (len(k), k)):
        basis = "^".join(f"d{names[i]}" for i in idx)
        coeff = format_scalar(f.comps[idx])
        terms.append(f"({coeff})" + (f"*{basis}" if basis else ""))
    return " + ".join(terms)


def format_element(x) -> str:
    parts = []
    if not x.body.is_zero():
        parts.append(format_form(x.body))
    if not x.prime.is_zero():
        parts.append(f"[{format_form(x.prime)}] theta'")
    dprime = getattr(x, "dprime", None)
    if dprime is not None and not dprime.is_zero():
        parts.append(f"[{format_form(dprime)}] dtheta'")
    return " + ".join(parts) or "0"


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _tolerance(args, geom: Geometry):
    if args.tolerance is None:
        return default_tolerance(geom)
    return None if geom.exact else args.tolerance


def _geometry(args) -> Geometry:
    definition = load_geometry(args.geometry)
    eps = None
    if args.tolerance is not None and definition.backend == "jet":
        eps = min(args.tolerance, Fraction(1, 10**20))
    return definition.build(args.order, eps)


def _environment(args, geom: Geometry, tol) -> dict:
    return {
        "geometry": geom.name,
        "backend": "rational" if geom.exact else f"jet(order={geom.order})",
        "tolerance": "exact" if tol is None else str(tol),
        "seed": args.seed,
        "samples": args.samples,
        "lambda": str(args.lam),
        "cap": args.cap,
    }


def cmd_verify(args) -> Report:
    geom = _geometry(args)
    tol = _tolerance(args, geom)
    report = run_suite(geom, args.suite, args.samples, args.seed, tol, args.lam, args.cap)
    report.suite = f"verify.{args.suite}"
    return report


def cmd_ricci(args) -> Report:
    geom = _geometry(args)
    tol = _tolerance(args, geom)
    report = ricci_suite(geom, max(args.samples // 6, 3), args.seed, tol)
    report.environment = _environment(args, geom, tol)
    delta = geom.delta
    via_delta = ricci_via_delta(delta)
    oracle = delta.christoffel.ricci_tensor()
    names = geom.chart.names
    rows = [["component", "-1/2 Delta(g)", "Christoffel", "difference"]]
    for a in range(geom.dim):
        for b in range(geom.dim):
            left = via_delta.coefficient((a,), (b,))
            right = oracle.coefficient((a,), (b,))
            diff = left - right
            rows.append([f"d{names[a]} (x) d{names[b]}", format_scalar(left), format_scalar(right), f"{diff.max_abs():.3e}"])
    report.tables["ricci"] = rows
    if not geom.exact:
        report.notes.append(JET_NOTE)
    return report


def _relation_rows(ext, host, chart, two: bool) -> list[list[str]]:
    names = chart.names
    n = chart.dim
    xs = [ext.element(host.coordinate(i)) for i in range(n)]
    dxs = [ext.element(chart.dx(i)) for i in range(n)]
    rows = [["relation", "value"]]
    for i in range(n):
        for j in range(i, n):
            rows.append([f"[{names[i]}, {names[j]}]", format_element(graded_commutator(xs[i], xs[j]))])
    for i in range(n):
        for j in range(n):
            rows.append([f"[{names[i]}, d{names[j]}]", format_element(graded_commutator(xs[i], dxs[j]))])
    for i in range(n):
        for j in range(i, n):
            rows.append([f"{{d{names[i]}, d{names[j]}}}", format_element(graded_commutator(dxs[i], dxs[j]))])
    for i in range(n):
        rows.append([f"d.{names[i]}", format_element(xs[i].d())])
    for i in range(n):
        rows.append([f"d.d{names[i]}", format_element(dxs[i].d())])
    theta = ext.theta()
    rows.append(["d.theta'", format_element(theta.d())])
    if two:
        rows.append(["d.dtheta'", format_element(ext.dtheta().d())])
    return rows


def cmd_quantize(args) -> Report:
    geom = _geometry(args)
    tol = _tolerance(args, geom)
    host = ClassicalHost(geom.chart, label=geom.name)
    cocycle = classical_cleft(geom.delta, host, args.lam, tol=tol)
    report = cocycle_check(cocycle, host, args.samples, args.seed, tol)
    report.suite = "quantize"
    report.environment = _environment(args, geom, tol)
    ext = Extension(cocycle, host)
    ext2 = Extension2(cocycle, host)
    report.tables["extension"] = _relation_rows(ext, host, geom.chart, False)
    report.tables["extension2"] = _relation_rows(ext2, host, geom.chart, True)
    if not geom.exact:
        report.notes.append(JET_NOTE)
    return report


def cmd_z2(args) -> Report:
    report = z2_report(PerpTable())
    report.extend(z2_extension_suite(args.samples, args.seed, args.lam).checks)
    report.extend(z2_gauge_suite(max(args.samples // 3, 5), args.seed, args.lam).checks)
    report.environment.update({"seed": args.seed, "samples": args.samples, "lambda": str(args.lam)})
    return report


def cmd_spacetime(args) -> Report:
    geom = _geometry(args)
    data = geom.conformal()
    if data is None:
        raise UsageError(f"geometry {geom.name} has no conformal block (conformal_tau, conformal_alpha, conformal_beta)")
    tol = _tolerance(args, geom)
    report = spacetime_suite(geom, data, max(args.samples // 5, 6), args.seed, tol, args.lam, args.cap)
    report.environment.update(_environment(args, geom, tol))
    return report


COMMANDS = {
    "verify": cmd_verify,
    "ricci": cmd_ricci,
    "quantize": cmd_quantize,
    "z2": cmd_z2,
    "spacetime": cmd_spacetime,
}


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _nonnegative(text: str) -> Fraction:
    value = _fraction(text)
    if value < 0:
        raise argparse.ArgumentTypeError("tolerance must be non-negative")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--geometry", default="flat2", help=f"built-in name ({', '.join(BUILTINS)}) or definition file")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=30)
    common.add_argument("--lambda", dest="lam", type=_fraction, default=Fraction(1))
    common.add_argument("--tolerance", type=_nonnegative, default=None, help="per jet coefficient; exact backends ignore it")
    common.add_argument("--order", type=int, default=None, help="jet order")
    common.add_argument("--cap", type=int, default=6, help="cap on the t-degree")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--report", metavar="FILE", help="also write the structured report to FILE")
    parser = argparse.ArgumentParser(prog="cleftdga", description="Verify codifferential geometry and its quantisation.")
    sub = parser.add_subparsers(dest="command", required=True)
    verify = sub.add_parser("verify", parents=[common], help="run verification suites")
    verify.add_argument("--suite", choices=SUITES, default="all")
    sub.add_parser("ricci", parents=[common], help="Ricci tensor two ways")
    sub.add_parser("quantize", parents=[common], help="relations of the extended calculi")
    sub.add_parser("z2", parents=[common], help="the two-point geometry")
    sub.add_parser("spacetime", parents=[common], help="quantised spacetime relations")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.order is not None and args.order < 3:
        parser.error("--order must be at least 3")
    if args.samples < 1:
        parser.error("--samples must be positive")
    try:
        report = COMMANDS[args.command](args)
    except (ParseError, InvalidMetric, UsageError, ValueError) as exc:
        print(f"cleftdga: error: {exc}", file=sys.stderr)
        return 2
    except CalculusError as exc:
        # an identity used internally did not hold, which is a failed check
        report = Report(args.command, [Check(f"{args.command}.completed", False, 0.0, 0, f"{type(exc).__name__}: {exc}")])
    print(report.to_json() if args.format == "json" else report.to_text())
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(report.to_json() + "\n")
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
