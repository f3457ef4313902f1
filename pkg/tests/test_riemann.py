import random
from fractions import Fraction

import pytest
import sympy

from cleftdga.errors import InvalidMetric
from cleftdga.geometry import builtin
from cleftdga.riemann import (
    Metric,
    curvature,
    divergence_delta,
    hodge_delta,
    hodge_laplacian,
    laplace_beltrami,
    levi_connection,
    metric_pairing,
    ricci_via_delta,
)
from cleftdga.suites import run_suite, bijection_suite, bv_suite, default_tolerance, ricci_suite, riemann_suite

from conftest import geometry

JET_TOL = Fraction(1, 10**8)


def sympy_geometry(matrix, syms):
    """Christoffel symbols Gamma^a_bc and Ricci R_bc computed directly."""
    g = sympy.Matrix(matrix)
    gi = g.inv()
    n = len(syms)
    gamma = [
        [[sympy.simplify(sum(gi[a, e] * (sympy.diff(g[e, b], syms[c]) + sympy.diff(g[e, c], syms[b]) - sympy.diff(g[b, c], syms[e])) for e in range(n)) / 2) for c in range(n)] for b in range(n)]
        for a in range(n)
    ]

    def riemann(a, b, c, d):
        # R^a_bcd = d_c G^a_db - d_d G^a_cb + G^a_ce G^e_db - G^a_de G^e_cb
        out = sympy.diff(gamma[a][d][b], syms[c]) - sympy.diff(gamma[a][c][b], syms[d])
        out += sum(gamma[a][c][e] * gamma[e][d][b] - gamma[a][d][e] * gamma[e][c][b] for e in range(n))
        return out

    ricci = [[sympy.simplify(sum(riemann(a, b, a, d) for a in range(n))) for d in range(n)] for b in range(n)]
    return gamma, gi, ricci


def as_sympy(fn, syms):
    return sympy.sympify(str(fn).replace("^", "**"), locals={str(s): s for s in syms})


def close(jet, expr, syms, point):
    return abs(float(jet.value()) - float(expr.subs(dict(zip(syms, point))))) < 1e-12


DIAG = [[1 + sympy.Symbol("x") ** 2, 0], [0, 1 + sympy.Symbol("y") ** 2]]
TH, PH = sympy.symbols("th ph")


def test_ricci_matches_independent_oracle_on_diagpoly():
    geom = geometry("diagpoly")
    syms = sympy.symbols("x y")
    _, _, ricci = sympy_geometry(DIAG, syms)
    ours = ricci_via_delta(geom.delta)
    for a in range(2):
        for b in range(2):
            assert sympy.simplify(as_sympy(ours.coefficient((a,), (b,)), syms) - ricci[a][b]) == 0


def test_sphere_ricci_equals_metric():
    geom = geometry("sphere2")
    ours = ricci_via_delta(geom.delta)
    g = geom.metric.metric_tensor()
    assert (ours - g).is_zero(JET_TOL)
    _, _, ricci = sympy_geometry([[1, 0], [0, sympy.sin(TH) ** 2]], (TH, PH))
    for a in range(2):
        for b in range(2):
            assert close(ours.coefficient((a,), (b,)), ricci[a][b], (TH, PH), (1, 1))


def test_scaled_sphere_ricci_is_scale_invariant():
    geom = builtin("sphere2r:3").build()
    ours = ricci_via_delta(geom.delta)
    unit = ricci_via_delta(geometry("sphere2").delta)
    for a in range(2):
        for b in range(2):
            diff = ours.coefficient((a,), (b,)).value() - unit.coefficient((a,), (b,)).value()
            assert abs(float(diff)) < 1e-30


def test_flat_ricci_is_exactly_zero():
    assert ricci_via_delta(geometry("flat3").delta).is_zero()


@pytest.mark.parametrize("name", ["diagpoly", "sphere2"])
def test_connection_on_coordinate_forms_matches_christoffel(name):
    geom = geometry(name)
    if name == "diagpoly":
        syms, matrix = sympy.symbols("x y"), DIAG
    else:
        syms, matrix = (TH, PH), [[1, 0], [0, sympy.sin(TH) ** 2]]
    gamma, gi, _ = sympy_geometry(matrix, syms)
    chart = geom.chart
    for a in range(2):
        for b in range(2):
            ours = levi_connection(geom.delta, chart.dx(a), chart.dx(b))
            for d in range(2):
                # nabla along the vector g^{ac} d_c of dx^b has dx^d component -g^{ac} Gamma^b_cd
                want = -sum(gi[a, c] * gamma[b][c][d] for c in range(2))
                got = ours.coefficient((d,))
                if geom.exact:
                    assert sympy.simplify(as_sympy(got, syms) - want) == 0
                else:
                    assert close(got, want, syms, (1, 1))


def test_divergence_agrees_with_hodge_codifferential():
    geom = geometry("flat3")
    star = hodge_delta(geom.metric)
    rng = random.Random(0)
    for k in range(4):
        w = geom.chart.random_form(rng, k)
        assert geom.delta(w) == star(w)


def test_laplacians_on_functions_agree_with_laplace_beltrami_operator():
    geom = geometry("diagpoly")
    syms = sympy.symbols("x y")
    f = geom.chart.scalar(geom.chart.random_function(random.Random(1)))
    fe = as_sympy(f.coefficient(()), syms)
    g = sympy.Matrix(DIAG)
    sq = sympy.sqrt(g.det())
    lb = sum(sympy.diff(sq * g.inv()[i, i] * sympy.diff(fe, syms[i]), syms[i]) for i in range(2)) / sq
    # with the divergence codifferential both equal div grad on functions
    got = as_sympy(hodge_laplacian(geom.delta, f).coefficient(()), syms)
    assert sympy.simplify(got - lb) == 0
    assert sympy.simplify(as_sympy(laplace_beltrami(geom.delta, f).coefficient(()), syms) - lb) == 0


def test_metric_must_be_symmetric_and_invertible():
    chart = geometry("flat2").chart
    one, zero = chart.ring.one(), chart.ring.zero()
    with pytest.raises(InvalidMetric):
        Metric.from_matrix(chart, [[one, one], [zero, one]])
    with pytest.raises(InvalidMetric):
        Metric.from_matrix(chart, [[one, one], [one, one]])


def test_pairing_of_coordinate_forms_is_inverse_metric():
    geom = geometry("diagpoly")
    c = geom.chart
    assert metric_pairing(c.dx(0), c.dx(0), geom.metric) == geom.metric.g_inv[0][0]


def test_curvature_of_flat_space_vanishes():
    geom = geometry("flat2")
    c = geom.chart
    rng = random.Random(2)
    w, h, z = (c.random_form(rng, 1) for _ in range(3))
    assert curvature(geom.delta, w, h, z).is_zero()


def test_suites_pass(geom):
    tol = default_tolerance(geom)
    for report in (
        riemann_suite(geom, 12, 0, tol),
        bv_suite(geom, 12, 0, tol),
        ricci_suite(geom, 3, 0, tol),
        bijection_suite(geom, 2, 0, tol),
    ):
        assert report.passed, report.to_text()


def test_zero_tolerance_jets_fail_honestly():
    geom = builtin("sphere2").build(eps=0)
    report = run_suite(geom, "riemann", 6, 0, Fraction(0))
    assert not report.passed
    assert not any(c.passed for c in report.checks)
