import itertools
import random
from fractions import Fraction

import pytest
import sympy

from cleftdga.coefficients import RationalRing
from cleftdga.errors import ChartMismatch
from cleftdga.forms import Chart, Form, TensorForm, graded_commutator, leibnizator

NAMES = ("x", "y", "z")
SYMS = sympy.symbols(NAMES)


@pytest.fixture(scope="module")
def chart():
    return Chart(RationalRing(NAMES))


def to_sympy(fn):
    return sympy.sympify(str(fn).replace("^", "**"), locals=dict(zip(NAMES, SYMS)))


def evaluate(form, vectors):
    """Alternating evaluation on coordinate vector fields by permutation sums."""
    k = len(vectors)
    total = sympy.Integer(0)
    for idx, c in form.part(k).comps.items():
        for perm in itertools.permutations(range(k)):
            if tuple(vectors[p] for p in perm) == idx:
                total += sympy.combinatorics.Permutation(list(perm)).signature() * to_sympy(c)
    return sympy.expand(total)


def test_wedge_of_one_forms_is_a_determinant(chart):
    rng = random.Random(1)
    for _ in range(5):
        ones = [chart.random_form(rng, 1, 1) for _ in range(3)]
        product = ones[0] * ones[1] * ones[2]
        matrix = sympy.Matrix([[to_sympy(w.coefficient((j,))) for j in range(3)] for w in ones])
        assert sympy.expand(to_sympy(product.coefficient((0, 1, 2))) - matrix.det()) == 0


def test_d_matches_invariant_formula(chart):
    rng = random.Random(2)
    for k in range(3):
        w = chart.random_form(rng, k)
        dw = w.d()
        for vecs in itertools.combinations(range(3), k + 1):
            want = sum(
                (-1) ** i * sympy.diff(evaluate(w, vecs[:i] + vecs[i + 1 :]), SYMS[vecs[i]]) for i in range(k + 1)
            )
            assert sympy.expand(evaluate(dw, vecs) - want) == 0


def test_graded_laws(chart):
    rng = random.Random(3)
    for _ in range(10):
        p, q, r = (rng.randint(0, 3) for _ in range(3))
        w, h, z = chart.random_form(rng, p), chart.random_form(rng, q), chart.random_form(rng, r)
        assert (w * h) * z == w * (h * z)
        assert w * h == (h * w).scale((-1) ** (p * q))
        assert (w * h).d() == w.d() * h + (w * h.d()).scale((-1) ** p)
        assert w.d().d().is_zero()
        assert graded_commutator(w, h).is_zero()
        assert leibnizator(lambda x: x.d(), 1, w, h).is_zero()


def test_one_forms_square_to_zero(chart):
    rng = random.Random(4)
    w = chart.random_form(rng, 1)
    assert (w * w).is_zero()
    assert (chart.dx(0) * chart.dx(0)).is_zero()
    assert chart.dx(1) * chart.dx(0) == -chart.basis((0, 1))


def test_contraction_is_an_odd_derivation(chart):
    rng = random.Random(5)
    for _ in range(5):
        p = rng.randint(0, 3)
        w, h = chart.random_form(rng, p), chart.random_form(rng, rng.randint(0, 3))
        for i in range(3):
            lhs = (w * h).contract(i)
            rhs = w.contract(i) * h + (w * h.contract(i)).scale((-1) ** p)
            assert lhs == rhs


def test_basis_requires_increasing_index(chart):
    with pytest.raises(ValueError):
        chart.basis((1, 0))
    assert chart.form({(1, 0): 1}) == -chart.basis((0, 1))


def test_charts_do_not_mix(chart):
    other = Chart(RationalRing(NAMES))
    with pytest.raises(ChartMismatch):
        chart.dx(0) + other.dx(0)


def test_tensor_pairs_round_trip(chart):
    rng = random.Random(6)
    pairs = [(chart.random_form(rng, 1), chart.random_form(rng, 1)) for _ in range(2)]
    t = TensorForm.from_pairs(chart, pairs)
    assert TensorForm.from_pairs(chart, t.pairs()) == t
    assert (t - t).is_zero()
    assert t.scale(Fraction(1, 2)) + t.scale(Fraction(1, 2)) == t


def test_degree_bookkeeping(chart):
    w = chart.one() + chart.dx(0) * chart.dx(2)
    assert sorted(w.parts()) == [0, 2]
    assert chart.volume().degree == 3
    assert Form(chart, {}).is_zero()
