"""Acceptance criteria 1-10, one PASS/FAIL line each.

Run with ``pytest -s tests/test_acceptance.py`` to see the lines, or
``python3 tests/test_acceptance.py`` for the table alone.
"""

import sys
import time
from fractions import Fraction

import pytest

from cleftdga.geometry import builtin
from cleftdga.report import Report
from cleftdga.riemann import ricci_via_delta
from cleftdga.suites import (
    bijection_suite,
    bv_suite,
    classical_gauge_suite,
    conformal_suite,
    extension_suite,
    riemann_suite,
    spacetime_suite,
    timext_suite,
    z2_extension_suite,
    z2_gauge_suite,
)
from cleftdga.ncdga import z2_report

JET = Fraction(1, 10**8)
_cache = {}


def geom(name):
    if name not in _cache:
        _cache[name] = builtin(name).build()
    return _cache[name]


def tol(g):
    return None if g.exact else JET


def failing(report: Report, prefix=""):
    return [f"{c.id}" for c in report.checks if c.id.startswith(prefix) and not c.passed]


def samples_of(report: Report, id):
    return next(c.samples for c in report.checks if c.id == id)


def criterion_1():
    start = time.perf_counter()
    sphere = builtin("sphere2").build()
    ric = ricci_via_delta(sphere.delta)
    oracle = sphere.delta.christoffel.ricci_tensor()
    ok_oracle = (ric - oracle).is_zero(JET)
    ok_metric = (ric - sphere.metric.metric_tensor()).is_zero(JET)
    elapsed = time.perf_counter() - start
    flat = ricci_via_delta(geom("flat3").delta).is_zero()
    ok = ok_oracle and ok_metric and flat and elapsed < 10
    return ok, f"sphere2 oracle={ok_oracle} equals_g={ok_metric} in {elapsed:.2f}s; flat3 exactly zero={flat}"


def criterion_2():
    bad, notes = [], []
    for name in ("flat2", "sphere2", "diagpoly"):
        g = geom(name)
        r = riemann_suite(g, 100, 0, tol(g))
        for id in ("riemann.levi_coordinate_pairs", "riemann.levi_two_forms", "riemann.torsion_zero", "riemann.metric_compatible"):
            c = next(c for c in r.checks if c.id == id)
            need = 50 if id.endswith("two_forms") else 100 if not id.endswith("pairs") else 1
            if not c.passed or c.samples < need:
                bad.append(f"{name}:{id}")
        notes.append(f"{name} two-forms={samples_of(r, 'riemann.levi_two_forms')}")
    return not bad, "; ".join(notes) + (f"; failing {bad}" if bad else "")


BV_ROWS = (
    "bv.triple",
    "bv.perp_four_term",
    "bv.delta_interior",
    "bv.interior_square_leibnizator",
    "bv.schouten_first",
    "bv.schouten_second",
    "bv.leibnizator_product",
    "bv.laplacian_leibnizator",
    "bv.schouten_higher",
)


def criterion_3():
    bad = []
    for name in ("flat2", "flat3", "diagpoly", "sphere2"):
        g = geom(name)
        r = bv_suite(g, 100, 0, tol(g))
        status = {c.id: (c.passed, c.samples) for c in r.checks}
        for id in BV_ROWS:
            passed, n = status.get(id, (False, 0))
            if not passed or n < 100:
                bad.append(f"{name}:{id}")
    return not bad, f"{len(BV_ROWS)} identities x 4 geometries x 100 samples" + (f"; failing {bad}" if bad else "")


def criterion_4():
    bad = []
    for name in ("flat2", "diagpoly"):
        r = bijection_suite(geom(name), 5, 0, None)
        bad += [f"{name}:{i}" for i in failing(r)]
    return not bad, "5 vector fields on flat2 and diagpoly, exact" + (f"; failing {bad}" if bad else "")


def criterion_5():
    start = time.perf_counter()
    r = z2_report(max_degree=6)
    elapsed = time.perf_counter() - start
    ok = r.passed and elapsed < 1.0
    return ok, f"{len(r.checks)} checks, degree <= 6, {elapsed:.2f}s" + (f"; failing {failing(r)}" if not r.passed else "")


EXT_PREFIXES = ("cocycle.", "extension.", "cleft.", "reconstruct.", "ext2.")


def criterion_6():
    bad = []
    reports = [(name, extension_suite(geom(name), 100, 0, tol(geom(name)))) for name in ("flat2", "sphere2")]
    reports.append(("z2", z2_extension_suite(100, 0)))
    for name, r in reports:
        bad += [f"{name}:{i}" for i in failing(r)]
        ids = {c.id for c in r.checks}
        for prefix in EXT_PREFIXES:
            if not any(i.startswith(prefix) for i in ids):
                bad.append(f"{name}:missing {prefix}")
    return not bad, "flat2, sphere2, z2 with the two extensions, 100 samples" + (f"; failing {bad}" if bad else "")


def criterion_7():
    bad, maps = [], 0
    reports = [(name, classical_gauge_suite(geom(name), 20, 0, tol(geom(name)))) for name in ("flat2", "diagpoly", "sphere2")]
    reports.append(("z2", z2_gauge_suite(20, 0)))
    for name, r in reports:
        bad += [f"{name}:{i}" for i in failing(r)]
        count = sum(1 for c in r.checks if c.id.startswith("gauge.perp_changed"))
        maps += count
        if count < 3:
            bad.append(f"{name}: only {count} maps")
    return not bad, f"{maps} nontrivial bimodule maps over 4 geometries" + (f"; failing {bad}" if bad else "")


def criterion_8():
    bad = []
    for name in ("flat2", "flat3"):
        r = timext_suite(geom(name), 30, 0, None)
        bad += [f"{name}:{i}" for i in failing(r)]
        if not any(c.id == "line.min_relation" for c in r.checks):
            bad.append("line calculus missing")
    r = spacetime_suite(geom("flat2"), None, 6, 0, None)
    bad += [f"spacetime:{i}" for i in failing(r, "semidirect.") + failing(r, "tau.")]
    return not bad, "tau = 0 on flat2/flat3, spacetime tau on flat2, lines n = 3" + (f"; failing {bad}" if bad else "")


def criterion_9():
    bad = []
    for name in ("flat2", "flat3"):
        r = conformal_suite(geom(name), None, 5, 0, None)
        bad += [f"{name}:{i}" for i in failing(r)]
        if not any(c.id == "conformal.wrong_alpha_rejected" and c.passed for c in r.checks):
            bad.append(f"{name}: wrong alpha not rejected")
    return not bad, "Euler form strong and degree-1 checks, wrong alpha rejected" + (f"; failing {bad}" if bad else "")


def criterion_10():
    bad, detail = [], []
    for name, nonzero in (("flat2", False), ("flat3sc", True)):
        r = spacetime_suite(geom(name), None, 6, 0, None)
        bad += [f"{name}:{i}" for i in failing(r)]
        sq = next(c for c in r.checks if c.id == "spacetime.lambda_squared_term")
        seen = "nonzero" in sq.detail
        detail.append(f"{name} lambda^2 term {'nonzero' if seen else 'zero'}")
        if seen is not nonzero:
            bad.append(f"{name}: lambda^2 term expected {'nonzero' if nonzero else 'zero'}")
    return not bad, "; ".join(detail) + (f"; failing {bad}" if bad else "")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.parametrize("number", range(1, 11))
def test_criterion(number):
    ok, detail = CRITERIA[number - 1]()
    print(f"\ncriterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


if __name__ == "__main__":
    results = []
    for i, fn in enumerate(CRITERIA, start=1):
        ok, detail = fn()
        results.append(ok)
        print(f"criterion {i:2d}: {'PASS' if ok else 'FAIL'}  {detail}", flush=True)
    sys.exit(0 if all(results) else 1)
