"""The universal calculus on two points and its inner cleft geometry.

Forms are finite sums ``sum_n f_n theta^n`` with ``f_n`` functions on the two
points.  The relations are ``theta f = bar(f) theta`` and
``d f = (bar f - f) theta``; the calculus is inner with
``d w = theta w - (-1)^|w| w theta``.

A ``PerpTable`` fixes the degree -2 bimodule map on powers of ``theta``.  The
codifferential is ``theta perp``, the interior product ``j = perp / 2`` and the
covariant derivative ``nabla_w = -1/2 L_{perp theta}(w, .)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .coefficients import TWO_POINT, TwoPointFn, as_fraction
from .errors import DegreeError, Inhomogeneous, Overflow
from .forms import leibnizator
from .report import Check, Report, Tally

__all__ = [
    "NcAlgebra",
    "NcForm",
    "NcTensor",
    "PerpTable",
    "NcConnectionData",
    "nc_mul",
    "nc_d",
    "nc_perp",
    "nc_inner_delta",
    "nc_connection",
    "nc_sigma",
    "nc_interior",
    "nc_pairing",
    "nc_laplacian",
    "perp_identity_check",
    "nc_metric_checks",
    "braided_leibniz_check",
    "nc_torsion_compat",
    "nc_ricci_delta",
    "nc_cleft_checks",
    "z2_value_table",
    "z2_report",
]

Number = (int, Fraction)
HALF = Fraction(1, 2)


class NcAlgebra:
    """Factory for forms truncated at degree ``cap``."""

    def __init__(self, cap: int = 8):
        if cap < 1:
            raise ValueError("cap must be at least 1")
        self.cap = cap

    def __repr__(self) -> str:
        return f"NcAlgebra(cap={self.cap})"

    def zero(self) -> "NcForm":
        return NcForm(self, {})

    def one(self) -> "NcForm":
        return NcForm(self, {0: TWO_POINT.one()})

    def function(self, f) -> "NcForm":
        if isinstance(f, Number):
            f = TWO_POINT.const(f)
        return NcForm(self, {0: f})

    def theta(self, power: int = 1) -> "NcForm":
        return NcForm(self, {power: TWO_POINT.one()})

    def term(self, f, power: int) -> "NcForm":
        if isinstance(f, Number):
            f = TWO_POINT.const(f)
        return NcForm(self, {power: f})

    def basis(self, max_degree: int | None = None) -> list["NcForm"]:
        """``delta_x theta^n`` and ``delta_y theta^n`` for ``n <= max_degree``."""
        top = self.cap if max_degree is None else max_degree
        return [self.term(f, n) for n in range(top + 1) for f in TWO_POINT.basis()]

    def basis_of_degree(self, degree: int) -> list["NcForm"]:
        return [self.term(f, degree) for f in TWO_POINT.basis()]

    def random_function(self, rng: random.Random, bound: int = 3) -> TwoPointFn:
        return TwoPointFn(rng.randint(-bound, bound), rng.randint(-bound, bound))

    def random_form(self, rng: random.Random, degree: int, bound: int = 3) -> "NcForm":
        return self.term(self.random_function(rng, bound), degree)

    # structure used by the cleft reconstruction --------------------------
    def decompose_one_form(self, omega: "NcForm") -> list[tuple["NcForm", "NcForm"]]:
        """Write a 1-form as ``sum a db``: here ``theta = (-1, 1) d(delta_x)``."""
        omega_1 = omega.part(1)
        f = omega_1.coefficient(1)
        a = f * TwoPointFn(-1, 1)
        return [(self.function(a), self.function(TWO_POINT.delta("x")))]

    def split_first(self, omega: "NcForm") -> list[tuple["NcForm", "NcForm"]]:
        """Write a form of degree >= 2 as ``(f theta) theta^(n-1)``."""
        out = []
        for n, f in omega.comps.items():
            out.append((self.term(f, 1), self.theta(n - 1)))
        return out


class NcForm:
    """``sum_n f_n theta^n``."""

    __slots__ = ("algebra", "comps")

    def __init__(self, algebra: NcAlgebra, comps: Mapping[int, TwoPointFn]):
        self.algebra = algebra
        out = {}
        for n, f in comps.items():
            if f.is_zero():
                continue
            if n > algebra.cap:
                raise Overflow(f"degree {n} exceeds cap {algebra.cap}")
            if n < 0:
                continue
            out[n] = f
        self.comps = out

    # protocol --------------------------------------------------------------
    def zero_like(self) -> "NcForm":
        return self.algebra.zero()

    def one_like(self) -> "NcForm":
        return self.algebra.one()

    @property
    def degree(self) -> int:
        if len(self.comps) > 1:
            raise Inhomogeneous("form has several degrees")
        return next(iter(self.comps), 0)

    def parts(self) -> dict[int, "NcForm"]:
        return {n: NcForm(self.algebra, {n: f}) for n, f in sorted(self.comps.items())}

    def part(self, degree: int) -> "NcForm":
        return NcForm(self.algebra, {degree: self.comps[degree]} if degree in self.comps else {})

    def part_from(self, degree: int) -> "NcForm":
        return NcForm(self.algebra, {n: f for n, f in self.comps.items() if n >= degree})

    def coefficient(self, degree: int) -> TwoPointFn:
        return self.comps.get(degree, TWO_POINT.zero())

    def is_zero(self, tol=None) -> bool:
        return not self.comps

    def max_abs(self) -> float:
        return max((f.max_abs() for f in self.comps.values()), default=0.0)

    # arithmetic ------------------------------------------------------------
    def __add__(self, other: "NcForm") -> "NcForm":
        if isinstance(other, (Number, TwoPointFn)):
            other = self.algebra.function(other)
        comps = dict(self.comps)
        for n, f in other.comps.items():
            comps[n] = comps[n] + f if n in comps else f
        return NcForm(self.algebra, comps)

    __radd__ = __add__

    def __neg__(self) -> "NcForm":
        return NcForm(self.algebra, {n: -f for n, f in self.comps.items()})

    def __sub__(self, other: "NcForm") -> "NcForm":
        if isinstance(other, (Number, TwoPointFn)):
            other = self.algebra.function(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "NcForm":
        c = as_fraction(c)
        return NcForm(self.algebra, {n: f * c for n, f in self.comps.items()})

    def __mul__(self, other):
        if isinstance(other, Number):
            return self.scale(other)
        if isinstance(other, TwoPointFn):
            other = self.algebra.function(other)
        if not isinstance(other, NcForm):
            return NotImplemented
        comps: dict[int, TwoPointFn] = {}
        for m, f in self.comps.items():
            for n, g in other.comps.items():
                k = m + n
                term = f * g.bar_power(m)
                if term.is_zero():
                    continue
                if k > self.algebra.cap:
                    raise Overflow(f"product of degree {k} exceeds cap {self.algebra.cap}")
                comps[k] = comps[k] + term if k in comps else term
        return NcForm(self.algebra, comps)

    def __rmul__(self, other):
        if isinstance(other, Number):
            return self.scale(other)
        if isinstance(other, TwoPointFn):
            return self.algebra.function(other) * self
        return NotImplemented

    def d(self) -> "NcForm":
        comps = {}
        for n, f in self.comps.items():
            value = f.bar() - f if n % 2 == 0 else f.bar() + f
            if value.is_zero():
                continue
            if n + 1 > self.algebra.cap:
                raise Overflow(f"d raises degree {n} past cap {self.algebra.cap}")
            comps[n + 1] = value
        return NcForm(self.algebra, comps)

    def __eq__(self, other) -> bool:
        if isinstance(other, (Number, TwoPointFn)):
            other = self.algebra.function(other)
        if not isinstance(other, NcForm):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        if not self.comps:
            return "0"
        return " + ".join(f"{f}*theta^{n}" for n, f in sorted(self.comps.items()))


class NcTensor:
    """``sum f theta^m (x) theta^n`` in ``Omega tensor_A Omega``."""

    __slots__ = ("algebra", "comps")

    def __init__(self, algebra: NcAlgebra, comps: Mapping[tuple[int, int], TwoPointFn]):
        self.algebra = algebra
        self.comps = {k: v for k, v in comps.items() if not v.is_zero()}

    @classmethod
    def from_pairs(cls, algebra: NcAlgebra, pairs: Iterable[tuple[NcForm, NcForm]]) -> "NcTensor":
        comps: dict = {}
        for left, right in pairs:
            for m, f in left.comps.items():
                for n, g in right.comps.items():
                    k = (m, n)
                    term = f * g.bar_power(m)
                    comps[k] = comps[k] + term if k in comps else term
        return cls(algebra, comps)

    def __add__(self, other: "NcTensor") -> "NcTensor":
        comps = dict(self.comps)
        for k, v in other.comps.items():
            comps[k] = comps[k] + v if k in comps else v
        return NcTensor(self.algebra, comps)

    def __neg__(self) -> "NcTensor":
        return NcTensor(self.algebra, {k: -v for k, v in self.comps.items()})

    def __sub__(self, other: "NcTensor") -> "NcTensor":
        return self + (-other)

    def is_zero(self, tol=None) -> bool:
        return not self.comps

    def max_abs(self) -> float:
        return max((v.max_abs() for v in self.comps.values()), default=0.0)

    def __repr__(self) -> str:
        if not self.comps:
            return "0"
        return " + ".join(f"{f}*theta^{m}(x)theta^{n}" for (m, n), f in sorted(self.comps.items()))


def _default_rule(m: int, n: int) -> Fraction:
    return Fraction(2 * (-1) ** (m + 1) * m * n)


@dataclass
class PerpTable:
    """``theta^m perp theta^n = rule(m, n) theta^(m+n-2)``."""

    rule: Callable[[int, int], Fraction] = _default_rule
    label: str = "default"

    def coefficient(self, m: int, n: int) -> Fraction:
        if m == 0 or n == 0:
            return Fraction(0)
        return Fraction(self.rule(m, n))


def nc_mul(omega: NcForm, eta: NcForm) -> NcForm:
    return omega * eta


def nc_d(omega: NcForm) -> NcForm:
    return omega.d()


def nc_perp(table: PerpTable, omega: NcForm, eta: NcForm) -> NcForm:
    """Bimodule extension: ``(f theta^m) perp (g theta^n) = f bar^m(g) c(m,n) theta^(m+n-2)``."""
    comps: dict[int, TwoPointFn] = {}
    for m, f in omega.comps.items():
        for n, g in eta.comps.items():
            c = table.coefficient(m, n)
            if c == 0:
                continue
            k = m + n - 2
            term = f * g.bar_power(m) * c
            comps[k] = comps[k] + term if k in comps else term
    return NcForm(omega.algebra, comps)


def nc_inner_delta(table: PerpTable, omega: NcForm) -> NcForm:
    """Codifferential ``theta perp``."""
    return nc_perp(table, omega.algebra.theta(), omega)


def nc_interior(table: PerpTable, omega: NcForm, zeta: NcForm) -> NcForm:
    """``j_w(z) = 1/2 w perp z``."""
    return nc_perp(table, omega, zeta).scale(HALF)


def nc_pairing(table: PerpTable, omega: NcForm, eta: NcForm) -> TwoPointFn:
    """Inner product of 1-forms, ``j`` restricted to degree 1."""
    return nc_interior(table, omega.part(1), eta.part(1)).coefficient(0)


def nc_connection(table: PerpTable, omega: NcForm, eta: NcForm) -> NcForm:
    """``nabla_w h = -1/2 L_{perp theta}(w, h)`` for ``w`` of positive degree."""
    if 0 in omega.comps:
        raise DegreeError("covariant derivative needs a direction of degree >= 1")
    return _nabla(table, omega, eta)


def _nabla(table: PerpTable, omega: NcForm, eta: NcForm) -> NcForm:
    # the degree 0 part contributes nothing since perp is a bimodule map
    theta = omega.algebra.theta()
    right_perp = lambda x: nc_perp(table, x, theta)
    return leibnizator(right_perp, -1, omega.part_from(1), eta).scale(-HALF)


def nc_sigma(table: PerpTable, omega: NcForm, eta: NcForm, zeta: NcForm) -> NcForm:
    """``sigma_w(h (x) z) = j_{wh}(z) - (-1)^|w| w j_h(z)`` for a 1-form ``z``."""
    if any(n != 1 for n in zeta.comps):
        raise DegreeError("sigma takes a 1-form in its last slot")
    total = omega.zero_like()
    for k, piece in omega.parts().items():
        first = nc_interior(table, piece * eta, zeta)
        second = piece * nc_interior(table, eta, zeta)
        total = total + (first + second if k % 2 else first - second)
    return total


def nc_laplacian(table: PerpTable, omega: NcForm) -> NcForm:
    delta = lambda x: nc_inner_delta(table, x)
    return delta(omega).d() + delta(omega.d())


@dataclass
class NcConnectionData:
    """Covariant derivative, braiding, pairing and metric of an inner geometry."""

    table: PerpTable
    algebra: NcAlgebra

    def nabla(self, omega: NcForm, eta: NcForm) -> NcForm:
        return nc_connection(self.table, omega, eta)

    def sigma(self, omega: NcForm, eta: NcForm, zeta: NcForm) -> NcForm:
        return nc_sigma(self.table, omega, eta, zeta)

    def pairing(self, omega: NcForm, eta: NcForm) -> TwoPointFn:
        return nc_pairing(self.table, omega, eta)

    @property
    def metric_g(self) -> tuple[NcForm, NcForm]:
        theta = self.algebra.theta()
        return theta, theta


def _nabla_tensor(table: PerpTable, omega: NcForm, eta: NcForm, zeta: NcForm) -> NcTensor:
    """Covariant derivative of ``eta (x) zeta`` with the metric ``theta (x) theta``."""
    alg = omega.algebra
    theta = alg.theta()
    first = (nc_connection(table, omega, eta), zeta)
    second = (nc_sigma(table, omega, eta, theta), nc_connection(table, theta, zeta))
    return NcTensor.from_pairs(alg, [first, second])


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def perp_identity_check(table: PerpTable, algebra: NcAlgebra, max_total: int | None = None) -> Check:
    """Four term identity on all basis triples of total degree ``<= max_total``.

    ``(-1)^|h| (wh) perp z + (w perp h) z = w perp (hz) + (-1)^(|w|+|h|) w (h perp z)``
    """
    top = algebra.cap if max_total is None else max_total
    tally = Tally("z2.perp_four_term")
    basis = algebra.basis(top)
    for w in basis:
        for h in basis:
            for z in basis:
                m, n, k = w.degree, h.degree, z.degree
                if m + n + k > top:
                    continue
                lhs = nc_perp(table, w * h, z)
                lhs = (-lhs if n % 2 else lhs) + nc_perp(table, w, h) * z
                rhs = w * nc_perp(table, h, z)
                rhs = nc_perp(table, w, h * z) + (-rhs if (m + n) % 2 else rhs)
                tally.add(lhs - rhs, f"degrees ({m},{n},{k})")
    return tally.check()


def nc_metric_checks(table: PerpTable, algebra: NcAlgebra | None = None) -> Report:
    """Pairing, metric, torsion, Laplacian and curvature facts of the inner geometry."""
    alg = algebra or NcAlgebra()
    theta = alg.theta()
    top = alg.cap - 2
    nab = lambda w, h: nc_connection(table, w, h)
    report = Report("z2.metric")

    t_pair = Tally("z2.pairing")
    t_metric = Tally("z2.metric_inverse")
    for f in TWO_POINT.basis() + (TwoPointFn(2, -3),):
        for g in TWO_POINT.basis() + (TwoPointFn(-1, 5),):
            value = nc_pairing(table, alg.term(f, 1), alg.term(g, 1))
            t_pair.add(value - f * g.bar(), f"f={f} g={g}")
        w = alg.term(f, 1)
        t_metric.add(alg.function(nc_pairing(table, w, theta)) * theta - w, f"f={f}")
        t_metric.add(theta * alg.function(nc_pairing(table, theta, w)) - w, f"f={f}")
    report.add(t_pair.check())
    report.add(t_metric.check())

    t_compat = Tally("z2.metric_compatible")
    t_compat.add(_nabla_tensor(table, theta, theta, theta), "nabla_theta g")
    report.add(t_compat.check())

    t_torsion = Tally("z2.torsion_free")
    t_lap = Tally("z2.laplacian_formula")
    t_lb = Tally("z2.laplace_beltrami_zero")
    t_curv = Tally("z2.curvature_zero")
    nab_theta_theta = nab(theta, theta)
    for w in alg.basis(top):
        n = w.degree
        t_torsion.add(theta * nab(theta, w) - w.d(), f"{w}")
        lap = nc_laplacian(table, w)
        t_lap.add(lap - (nab(theta, w) + w.scale(2 * n)).scale(2), f"{w}")
        lb = nab(theta, nab(theta, w)) - nab(nab_theta_theta, w)
        t_lb.add(lb, f"{w}")
        h = nab(theta, w)
        curvature = NcTensor.from_pairs(alg, [(theta.d(), h), (-(theta * theta), nab(theta, h))])
        t_curv.add(curvature, f"{w}")
    t_dd = Tally("z2.delta_squared_module_map")
    delta = lambda x: nc_inner_delta(table, x)
    nonzero = False
    for w in alg.basis(top):
        dd = delta(delta(w))
        nonzero = nonzero or not dd.is_zero()
        for f in TWO_POINT.basis():
            a = alg.function(f)
            t_dd.add(delta(delta(a * w)) - a * dd, f"a={f} w={w}")
            t_dd.add(delta(delta(w * a)) - dd * a, f"a={f} w={w}")
    for t in (t_torsion, t_lap, t_lb, t_curv):
        report.add(t.check())
    report.add(t_dd.check("delta^2 is nonzero" if nonzero else "delta^2 vanishes"))
    return report


def _j(table: PerpTable, w: NcForm, z: NcForm) -> NcForm:
    return nc_interior(table, w, z)


def braided_leibniz_check(table: PerpTable, algebra: NcAlgebra | None = None) -> Report:
    """Equivalent forms of the braided Leibniz rule and the composition law for ``j``."""
    alg = algebra or NcAlgebra()
    theta = alg.theta()
    nab = lambda w, h: nc_connection(table, w, h)
    sigma = lambda w, h, z: nc_sigma(table, w, h, z)
    report = Report("z2.braided_leibniz")
    t_prime = Tally("z2.nabla_equals_nabla_prime")
    t_brl = Tally("z2.braided_leibniz")
    t_brl_prime = Tally("z2.braided_leibniz_prime")
    t_jlaw = Tally("z2.j_law")
    t_power = Tally("z2.nabla_theta_power")
    cap = alg.cap
    for w in alg.basis(cap - 1)[2:]:
        m = w.degree
        for h in alg.basis(cap - max(m - 1, 0) - 1):
            lhs = nab(w, h)
            rhs = _j(table, w, theta) * nab(theta, h)
            t_prime.add(lhs - rhs, f"w={w} h={h}")
    for m in range(1, cap):
        coeff = Fraction((-1) ** (m + 1) * m)
        for h in alg.basis(cap - m):
            lhs = nab(alg.theta(m), h)
            rhs = (alg.theta(m - 1) * nab(theta, h)).scale(coeff)
            t_power.add(lhs - rhs, f"m={m} h={h}")
    for w in alg.basis_of_degree(1):
        for h in alg.basis(3):
            for z in alg.basis(3):
                if h.degree + z.degree + 1 > cap:
                    continue
                lhs = nab(w, h * z)
                rhs = nab(w, h) * z + sigma(w, h, theta) * nab(theta, z)
                t_brl.add(lhs - rhs, f"w={w} h={h} z={z}")
                j_w = _j(table, w, theta)
                sigma_prime = j_w * sigma(theta, h, theta)
                nab_prime = lambda x: j_w * nab(theta, x)
                lhs = nab_prime(h * z)
                rhs = nab_prime(h) * z + sigma_prime * nab(theta, z)
                t_brl_prime.add(lhs - rhs, f"w={w} h={h} z={z}")
    for w in alg.basis(3):
        for h in alg.basis(3):
            for z in alg.basis_of_degree(1):
                lhs = _j(table, w * h, z)
                inner = _j(table, theta * h, z) + theta * _j(table, h, z)
                rhs = _j(table, w, theta) * inner
                tail = w * _j(table, h, z)
                rhs = rhs - tail if w.degree % 2 else rhs + tail
                t_jlaw.add(lhs - rhs, f"w={w} h={h} z={z}")
    for t in (t_prime, t_power, t_brl, t_brl_prime, t_jlaw):
        report.add(t.check())
    return report


def nc_torsion_compat(table: PerpTable, algebra: NcAlgebra | None = None) -> Report:
    """Torsion compatibility identity and the derivation property of ``T = theta nabla_theta - d``."""
    alg = algebra or NcAlgebra()
    theta = alg.theta()
    report = Report("z2.torsion")
    t_cond = Tally("z2.torsion_compatible")
    t_deriv = Tally("z2.torsion_derivation")
    for w in alg.basis(alg.cap - 3):
        for z in alg.basis_of_degree(1):
            lhs = theta * theta * _j(table, w, z) + theta * _j(table, theta * w, z)
            rhs = w * z
            t_cond.add(lhs - (-rhs if w.degree % 2 else rhs), f"w={w} z={z}")
    T = lambda x: theta * nc_connection(table, theta, x) - x.d()
    for w in alg.basis(3):
        for h in alg.basis(3):
            lhs = T(w * h)
            rhs = T(w) * h + (w * T(h) if w.degree % 2 == 0 else -(w * T(h)))
            t_deriv.add(lhs - rhs, f"w={w} h={h}")
    report.add(t_cond.check())
    report.add(t_deriv.check())
    return report


def nc_ricci_delta(table: PerpTable, algebra: NcAlgebra | None = None) -> Report:
    """Whether ``Ricci_Delta`` exists, and the Leibnizator of the Laplace-Beltrami operator."""
    alg = algebra or NcAlgebra()
    theta = alg.theta()
    nab = lambda w, h: nc_connection(table, w, h)
    report = Report("z2.ricci")
    wedge_g = theta * theta
    report.add(
        Check(
            "z2.metric_not_quantum_symmetric",
            passed=not wedge_g.is_zero(),
            residual=wedge_g.max_abs(),
            samples=1,
            detail="wedge(g) = theta^2 is nonzero, so Ricci_Delta is undefined",
        )
    )
    lb = lambda x: nab(theta, nab(theta, x)) - nab(nab(theta, theta), x)
    t_lb = Tally("z2.laplace_beltrami_leibnizator")
    t_sigma = Tally("z2.laplace_beltrami_leibnizator_sigma")
    for f in TWO_POINT.basis() + (TwoPointFn(3, -2),):
        a = alg.function(f)
        da = a.d()
        direction = da.scale(2) + _j(table, theta * theta, da)
        braided = da + nc_sigma(table, theta, theta, da)
        for w in alg.basis(alg.cap - 2):
            lhs = leibnizator(lb, 0, a, w)
            t_lb.add(lhs - nab(direction, w), f"a={f} w={w}")
            t_sigma.add(lhs - nab(braided, w), f"a={f} w={w}")
    report.add(t_lb.check())
    report.add(t_sigma.check())
    return report


def nc_cleft_checks(table: PerpTable, algebra: NcAlgebra | None = None) -> Report:
    """Covariant derivative laws coming from the cocycle ``2 nabla``."""
    alg = algebra or NcAlgebra()
    nab = lambda w, h: _nabla(table, w, h)
    delta = lambda x: nc_inner_delta(table, x)
    lap = lambda x: nc_laplacian(table, x)
    report = Report("z2.cleft")
    t_c1 = Tally("z2.connection_product_rule")
    t_c2 = Tally("z2.connection_laplacian_rule")
    t_left = Tally("z2.left_covariance")
    t_bimod = Tally("z2.bimodule_rule")
    t_half = Tally("z2.half_curvature_balanced")
    t_jflat = Tally("z2.interior_is_half_perp")
    basis3 = alg.basis(2)
    for w in basis3:
        for h in basis3:
            for z in basis3:
                lhs = nab(w, h * z)
                mid = w * nab(h, z)
                rhs = nab(w, h) * z + nab(w * h, z) + (mid if w.degree % 2 else -mid)
                t_c1.add(lhs - rhs, f"w={w} h={h} z={z}")
            lhs = leibnizator(lap, 0, w, h).scale(HALF)
            rhs = nab(w, h).d() + nab(w.d(), h)
            inner = nab(w, h.d())
            rhs = rhs + (-inner if w.degree % 2 else inner)
            t_c2.add(lhs - rhs, f"w={w} h={h}")
    fns = [alg.function(f) for f in TWO_POINT.basis()]
    ones = alg.basis_of_degree(1)
    for a in fns:
        for w in ones:
            for h in alg.basis(3):
                t_left.add(nab(a * w, h) - a * nab(w, h), f"a={a} w={w} h={h}")
                pair = alg.function(nc_pairing(table, w, a.d()))
                t_left.add(nab(w, a * h) - nab(w * a, h) - pair * h, f"a={a} w={w} h={h}")
                t_bimod.add(nab(w, h * a) - nab(w, h) * a - nc_sigma(table, w, h, a.d()), f"a={a} w={w} h={h}")
                # L_delta(h, a) vanishes, so j has no extra interior term
                t_jflat.add(leibnizator(delta, -1, h, a), f"h={h} a={a}")
            for v in ones:
                for x in alg.basis(2):
                    first = nab(w * a, nab(v, x)) - nab(nab(w * a, v), x)
                    second = nab(w, nab(a * v, x)) - nab(nab(w, a * v), x)
                    t_half.add(first - second, f"a={a} w={w} v={v} x={x}")
    for t in (t_c1, t_c2, t_left, t_bimod, t_half, t_jflat):
        report.add(t.check())
    return report


NC_DEFAULT = PerpTable()


def z2_value_table(table: PerpTable, algebra: NcAlgebra | None = None, max_degree: int = 6) -> Report:
    """Closed forms of the inner geometry on every basis element ``f theta^n`` with ``n <= max_degree``.

    ``delta(f theta^n) = 2 n fbar theta^(n-1)``, ``nabla_theta(f theta^n) = (f - (-1)^n fbar) theta^n``,
    ``sigma_theta(f theta^n (x) f' theta) = (-1)^n fbar theta^n fbar'``, ``nabla_theta theta = 2 theta``,
    ``sigma_theta(theta (x) theta) = -theta`` and
    ``nabla_{theta^m} theta^n = (-1)^(m+1) m theta^(m-1) nabla_theta theta^n``.
    """
    alg = algebra or NcAlgebra(max(8, 2 * max_degree))
    theta = alg.theta()
    fns = TWO_POINT.basis()
    report = Report("z2.values", environment={"max_degree": max_degree, "cap": alg.cap})
    t_delta = Tally("z2.value_delta")
    t_nabla = Tally("z2.value_nabla_theta")
    t_sigma = Tally("z2.value_sigma_theta")
    t_theta = Tally("z2.value_theta_theta")
    t_power = Tally("z2.value_nabla_theta_power")
    for n in range(max_degree + 1):
        sign = -1 if n % 2 else 1
        for f in fns:
            w = alg.term(f, n)
            expected = alg.term(f.bar() * (2 * n), n - 1) if n else alg.zero()
            t_delta.add(nc_inner_delta(table, w) - expected, f"f={f} n={n}")
            t_nabla.add(nc_connection(table, theta, w) - alg.term(f - f.bar() * sign, n), f"f={f} n={n}")
            for g in fns:
                lhs = nc_sigma(table, theta, w, alg.term(g, 1))
                rhs = (alg.function(f.bar()) * alg.theta(n) * alg.function(g.bar())).scale(sign)
                t_sigma.add(lhs - rhs, f"f={f} n={n} f'={g}")
        for m in range(1, max_degree + 1):
            if m + n > alg.cap:
                continue
            lhs = nc_connection(table, alg.theta(m), alg.theta(n))
            rhs = (alg.theta(m - 1) * nc_connection(table, theta, alg.theta(n))).scale((-1) ** (m + 1) * m)
            t_power.add(lhs - rhs, f"m={m} n={n}")
    t_theta.add(nc_connection(table, theta, theta) - theta.scale(2), "nabla_theta theta")
    t_theta.add(nc_sigma(table, theta, theta, theta) + theta, "sigma_theta(theta, theta)")
    for t in (t_delta, t_nabla, t_sigma, t_theta, t_power):
        report.add(t.check())
    return report


def z2_report(table: PerpTable | None = None, max_degree: int = 6) -> Report:
    """Every check of the two-point geometry in one report."""
    table = table or PerpTable()
    alg = NcAlgebra(max(8, max_degree + 2))
    report = Report("z2", environment={"perp": table.label, "cap": alg.cap, "max_degree": max_degree})
    report.add(perp_identity_check(table, alg))
    for part in (
        z2_value_table(table, None, max_degree),
        nc_metric_checks(table, alg),
        braided_leibniz_check(table, alg),
        nc_torsion_compat(table, alg),
        nc_ricci_delta(table, alg),
        nc_cleft_checks(table, alg),
    ):
        report.extend(part.checks)
    return report
