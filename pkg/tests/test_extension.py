import random
from fractions import Fraction

import pytest

from cleftdga.errors import CalculusError
from cleftdga.extension import (
    ClassicalHost,
    Cocycle,
    Extension,
    Extension2,
    TwoPointHost,
    classical_cleft,
    cocycle_check,
    coboundary_from_delta,
    extension_check,
    ext2_check,
    morphism_check,
    z2_inner_cocycle,
    zero_cocycle,
)
from cleftdga.forms import graded_commutator
from cleftdga.suites import extension_suite, default_tolerance, z2_extension_suite, z2_gauge_suite, classical_gauge_suite

from conftest import geometry


def same(a, b):
    return (a - b).is_zero()


def flat_ext(lam=1, name="flat2"):
    geom = geometry(name)
    host = ClassicalHost(geom.chart, label=geom.name)
    return geom, host, Extension(classical_cleft(geom.delta, host, lam), host)


def test_zero_cocycle_gives_the_host_product():
    geom = geometry("flat2")
    host = ClassicalHost(geom.chart)
    ext = Extension(zero_cocycle(), host)
    rng = random.Random(0)
    for _ in range(5):
        w, h = host.random_element(rng, 1), host.random_element(rng, 2)
        product = ext.element(w) * ext.element(h)
        assert product.body == w * h
        assert product.prime.is_zero()


@pytest.mark.parametrize("lam", [Fraction(1), Fraction(2), Fraction(-1, 3)])
def test_flat_plane_relations(lam):
    geom, host, ext = flat_ext(lam)
    c = geom.chart
    x, y = (ext.element(host.coordinate(i)) for i in range(2))
    dx, dy = ext.element(c.dx(0)), ext.element(c.dx(1))
    theta = ext.theta()
    assert same(graded_commutator(x, dx), theta.scale(lam))
    assert graded_commutator(x, dy).is_zero()
    assert graded_commutator(x, y).is_zero()
    assert graded_commutator(dx, dy).is_zero()
    assert graded_commutator(dx, dx).is_zero()
    assert same(x.d(), dx)
    assert theta.d().is_zero()


def test_diagpoly_relations_follow_the_inverse_metric():
    geom = geometry("diagpoly")
    host = ClassicalHost(geom.chart)
    lam = Fraction(3)
    ext = Extension(classical_cleft(geom.delta, host, lam), host)
    c = geom.chart
    rng = random.Random(1)
    for _ in range(4):
        a = c.scalar(c.random_function(rng))
        w = c.random_form(rng, 1)
        comm = graded_commutator(ext.element(a), ext.element(w))
        # [a, w] = lam (da, w) theta'
        pairing = sum((a.d().coefficient((i,)) * w.coefficient((i,)) * geom.metric.g_inv[i][i] for i in range(2)), c.ring.zero())
        assert comm.body.is_zero()
        assert comm.prime == c.scalar(pairing).scale(lam)


def test_theta_is_graded_central():
    geom, host, ext = flat_ext()
    rng = random.Random(2)
    theta = ext.theta()
    for k in range(3):
        x = ext.element(host.random_element(rng, k))
        sign = -1 if k % 2 else 1
        assert same(theta * x, (x * theta).scale(sign))
    assert (theta * theta).is_zero()


def test_broken_cocycle_is_detected():
    geom = geometry("flat2")
    host = ClassicalHost(geom.chart)
    good = classical_cleft(geom.delta, host)
    # doubling the Laplacian without touching the bracket breaks the second condition
    bad = Cocycle(lambda w: good.Delta(w).scale(2), good.bracket, good.lam, "broken")
    report = cocycle_check(bad, host, 20, 0)
    assert not report.passed
    ext = extension_check(Extension(bad, host), 20, 0)
    assert not ext.passed


def test_coboundary_is_a_cocycle():
    geom = geometry("diagpoly")
    host = ClassicalHost(geom.chart)
    report = cocycle_check(coboundary_from_delta(geom.delta), host, 20, 0)
    assert report.passed, report.to_text()


def test_two_extension_projects_to_the_one_extension():
    geom = geometry("flat2")
    host = ClassicalHost(geom.chart)
    cocycle = classical_cleft(geom.delta, host)
    report = ext2_check(Extension2(cocycle, host), 20, 0)
    assert report.passed, report.to_text()
    ids = {c.id for c in report.checks}
    assert any("surjection" in i or "project" in i for i in ids), ids


def test_two_extension_requires_flat_data():
    geom = geometry("flat2")
    with pytest.raises(ValueError):
        Extension2(zero_cocycle(), ClassicalHost(geom.chart))


def test_morphism_between_cleft_and_noncleft_extensions():
    report = extension_suite(geometry("flat2"), 12, 0, None)
    morph = [c for c in report.checks if c.id.startswith("morphism")]
    assert morph and all(c.passed for c in morph)


def test_extension_suite_passes(geom):
    report = extension_suite(geom, 12, 0, default_tolerance(geom))
    assert report.passed, report.to_text()


def test_z2_extension_and_gauge():
    report = z2_extension_suite(20, 0)
    assert report.passed, report.to_text()
    gauge = z2_gauge_suite(10, 0)
    assert gauge.passed, gauge.to_text()
    assert sum(1 for c in gauge.checks if c.id.startswith("gauge.perp_changed")) == 3


def test_classical_gauge_leaves_cocycle_unchanged():
    report = classical_gauge_suite(geometry("diagpoly"), 6, 0, None)
    assert report.passed, report.to_text()
