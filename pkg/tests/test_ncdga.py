import itertools
import random
import time
from fractions import Fraction

import pytest

from cleftdga.coefficients import TWO_POINT, TwoPointFn
from cleftdga.errors import Overflow
from cleftdga.ncdga import (
    NcAlgebra,
    PerpTable,
    nc_connection,
    nc_inner_delta,
    nc_laplacian,
    nc_perp,
    perp_identity_check,
    z2_report,
    z2_value_table,
)


@pytest.fixture(scope="module")
def alg():
    return NcAlgebra(8)


def test_d_is_inner_with_theta(alg):
    rng = random.Random(0)
    theta = alg.theta()
    for n in range(6):
        w = alg.random_form(rng, n)
        sign = -1 if n % 2 else 1
        assert w.d() == theta * w - (w * theta).scale(sign)


def test_dga_laws(alg):
    rng = random.Random(1)
    for _ in range(30):
        m, n, k = rng.randint(0, 2), rng.randint(0, 2), rng.randint(0, 2)
        w, h, z = alg.random_form(rng, m), alg.random_form(rng, n), alg.random_form(rng, k)
        assert (w * h) * z == w * (h * z)
        assert (w * h).d() == w.d() * h + (w * h.d()).scale((-1) ** m)
        assert w.d().d().is_zero()


def test_theta_commutes_past_functions_by_the_swap(alg):
    f = TwoPointFn(Fraction(1, 2), Fraction(3))
    assert alg.theta() * alg.function(f) == alg.term(f.bar(), 1)
    assert alg.function(f).d() == alg.term(f.bar() - f, 1)


def test_hand_computed_values(alg):
    one = TWO_POINT.one()
    # theta perp theta^n = 2 n theta^(n-1) and the sign alternates with the left degree
    assert nc_inner_delta(PerpTable(), alg.theta()) == alg.function(one * 2)
    assert nc_inner_delta(PerpTable(), alg.theta(3)) == alg.theta(2).scale(6)
    assert nc_perp(PerpTable(), alg.theta(2), alg.theta(1)) == alg.theta(1).scale(-4)
    # nabla_theta theta = 2 theta and Delta(theta) = d(2) + delta(d theta) = delta(2 theta^2)
    assert nc_connection(PerpTable(), alg.theta(), alg.theta()) == alg.theta().scale(2)
    assert nc_laplacian(PerpTable(), alg.theta()) == nc_inner_delta(PerpTable(), alg.theta().d())


def test_cap_is_enforced():
    small = NcAlgebra(2)
    with pytest.raises(Overflow):
        small.theta(2) * small.theta(1)


def test_wrong_perp_rule_breaks_the_four_term_identity(alg):
    check = perp_identity_check(PerpTable(lambda m, n: m * n, "unsigned"), alg, 5)
    assert not check.passed
    assert perp_identity_check(PerpTable(), alg, 5).passed


def test_value_table_up_to_degree_six():
    report = z2_value_table(PerpTable(), None, 6)
    assert report.passed, report.to_text()
    assert {c.id for c in report.checks} == {
        "z2.value_delta",
        "z2.value_nabla_theta",
        "z2.value_sigma_theta",
        "z2.value_theta_theta",
        "z2.value_nabla_theta_power",
    }


def test_full_report_is_exact_and_fast():
    start = time.perf_counter()
    report = z2_report()
    elapsed = time.perf_counter() - start
    assert report.passed, report.to_text()
    assert all(c.residual == 0 for c in report.checks if c.id != "z2.metric_not_quantum_symmetric")
    assert elapsed < 1.0
