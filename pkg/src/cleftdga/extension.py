"""Central extensions of a calculus by a graded-central 1-form ``theta'``.

An extension is fixed by a cocycle: a degree 0 map ``Delta`` and a degree -1
bracket.  Elements ``w + r theta'`` are stored with ``theta'`` on the right and
multiply by

    w . h = w h + (lam/2) (-1)^(|w|+|h|) [[w, h]] theta'
    d. w  = d w - (lam/2) (-1)^|w| (Delta w) theta'

The larger extension adds ``d theta'`` together with the data ``(perp, delta)``
of a flat cleft cocycle.  Everything here is generic over a host calculus:
``ClassicalHost`` wraps forms on a chart and ``TwoPointHost`` the universal
calculus on two points.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

from .coefficients import TWO_POINT, TwoPointFn, as_fraction
from .errors import DeltaNotCompatible, NotBimodule, NotCleft, PerpIdentityFails
from .forms import Chart, Form, graded_commutator, leibnizator
from .ncdga import NcAlgebra, NcForm, PerpTable, nc_inner_delta, nc_perp
from .report import Report, Tally
from .riemann import (
    Codifferential,
    interior,
    laplace_beltrami,
    lie_derivative,
    metric_pairing,
    perp as metric_perp,
)

__all__ = [
    "ClassicalHost",
    "TwoPointHost",
    "Cocycle",
    "Extension",
    "ExtElement",
    "Extension2",
    "Ext2Element",
    "zero_cocycle",
    "coboundary_from_delta",
    "cocycle_check",
    "ext_mul",
    "ext_d",
    "morphism_apply",
    "extract_delta",
    "morphism_check",
    "cleft_reconstruct",
    "construct_flat_cleft",
    "flat_noncleft_cocycle",
    "perp_gauge",
    "classical_cleft",
    "classical_relations",
    "z2_inner_cocycle",
    "extension_check",
    "cleft_check",
    "connection_check",
    "reconstruct_check",
    "ext2_mul",
    "ext2_d",
    "ext2_check",
]

HALF = Fraction(1, 2)
Map = Callable[[object], object]
Bracket = Callable[[object, object], object]


def _signed(x, k: int):
    return -x if k % 2 else x


# ---------------------------------------------------------------------------
# Hosts
# ---------------------------------------------------------------------------


class ClassicalHost:
    """Differential forms on a chart, sampled with random polynomial coefficients."""

    exhaustive = False

    def __init__(self, chart: Chart, coeff_degree: int = 2, bound: int = 3, label: str = ""):
        self.chart = chart
        self.dim = chart.dim
        self.max_degree = chart.dim
        self.coeff_degree = coeff_degree
        self.bound = bound
        self.label = label or f"classical{chart.dim}"

    def __repr__(self) -> str:
        return f"ClassicalHost({self.label})"

    def zero(self) -> Form:
        return self.chart.zero()

    def one(self) -> Form:
        return self.chart.one()

    def function(self, value) -> Form:
        return self.chart.scalar(value)

    def coordinate(self, i: int) -> Form:
        return self.chart.scalar(self.chart.coordinate(i))

    def random_function(self, rng: random.Random) -> Form:
        return self.chart.scalar(self.chart.random_function(rng, self.coeff_degree, self.bound))

    def random_element(self, rng: random.Random, degree: int) -> Form:
        if degree < 0 or degree > self.dim:
            return self.zero()
        if degree == 0:
            return self.random_function(rng)
        return self.chart.random_form(rng, degree, self.coeff_degree, self.bound)

    def functions(self, rng: random.Random, count: int) -> list[Form]:
        return [self.random_function(rng) for _ in range(count)]

    def tuples(self, rng: random.Random, arity: int, count: int, slack: int = 0) -> Iterator[tuple]:
        """Random homogeneous tuples with total degree at most ``dim + 1 - slack``."""
        top = max(self.dim + 1 - slack, 0)
        for _ in range(count):
            while True:
                degrees = [rng.randint(0, self.dim) for _ in range(arity)]
                if sum(degrees) <= top:
                    break
            yield tuple(self.random_element(rng, k) for k in degrees)

    def decompositions(self, omega: Form) -> list[list[tuple[Form, Form]]]:
        """Ways of writing a 1-form as ``sum a db``.

        The first uses ``f dx^i = f d(x^i)``; the second uses
        ``f dx^i = f / (1 + 2 x^i) d(x^i + (x^i)^2)``.
        """
        chart = self.chart
        plain, bent = [], []
        for (i,), f in omega.part(1).comps.items():
            xi = chart.coordinate(i)
            plain.append((chart.scalar(f), chart.scalar(xi)))
            bent.append((chart.scalar(f * (1 + 2 * xi).inverse()), chart.scalar(xi + xi * xi)))
        return [plain, bent]

    def splittings(self, omega: Form) -> list[list[tuple[Form, Form]]]:
        """Ways of writing a form of degree >= 2 as ``sum w1 h`` with ``w1`` a 1-form."""
        chart = self.chart
        first, swapped = [], []
        for idx, f in omega.comps.items():
            head = chart.scalar(f) * chart.dx(idx[0])
            first.append((head, chart.basis(idx[1:])))
            # dx^i dx^j rest = -dx^j (dx^i rest)
            head = chart.scalar(-f) * chart.dx(idx[1])
            swapped.append((head, chart.dx(idx[0]) * chart.basis(idx[2:])))
        return [first, swapped]


class TwoPointHost:
    """The universal calculus on two points, enumerated exhaustively."""

    exhaustive = True

    def __init__(self, algebra: NcAlgebra | None = None, sample_degree: int = 3, label: str = "z2"):
        self.algebra = algebra or NcAlgebra()
        self.max_degree = self.algebra.cap
        self.sample_degree = sample_degree
        self.label = label

    def __repr__(self) -> str:
        return f"TwoPointHost(cap={self.algebra.cap})"

    def zero(self) -> NcForm:
        return self.algebra.zero()

    def one(self) -> NcForm:
        return self.algebra.one()

    def function(self, value) -> NcForm:
        return self.algebra.function(value)

    def random_function(self, rng: random.Random) -> NcForm:
        return self.algebra.function(self.algebra.random_function(rng))

    def random_element(self, rng: random.Random, degree: int) -> NcForm:
        if degree < 0:
            return self.zero()
        return self.algebra.random_form(rng, degree)

    def functions(self, rng: random.Random, count: int) -> list[NcForm]:
        return [self.algebra.function(f) for f in TWO_POINT.basis()] + [self.algebra.function(TwoPointFn(2, -3))]

    def tuples(self, rng: random.Random, arity: int, count: int, slack: int = 0) -> Iterator[tuple]:
        """All basis tuples with total degree at most ``sample_degree``; ``count`` is ignored."""
        basis = self.algebra.basis(self.sample_degree)
        for combo in itertools.product(basis, repeat=arity):
            if sum(w.degree for w in combo) <= self.sample_degree:
                yield combo

    def decompositions(self, omega: NcForm) -> list[list[tuple[NcForm, NcForm]]]:
        """``theta = (-1, 1) d(delta_x) = (1, -1) d(delta_y)``."""
        alg = self.algebra
        f = omega.part(1).coefficient(1)
        via_x = [(alg.function(f * TwoPointFn(-1, 1)), alg.function(TWO_POINT.delta("x")))]
        via_y = [(alg.function(f * TwoPointFn(1, -1)), alg.function(TWO_POINT.delta("y")))]
        return [via_x, via_y]

    def splittings(self, omega: NcForm) -> list[list[tuple[NcForm, NcForm]]]:
        """``f theta^n = (f theta) theta^(n-1) = theta (bar f theta^(n-1))``."""
        alg = self.algebra
        left, right = [], []
        for n, f in omega.comps.items():
            left.append((alg.term(f, 1), alg.theta(n - 1)))
            right.append((alg.theta(1), alg.term(f.bar(), n - 1)))
        return [left, right]


# ---------------------------------------------------------------------------
# Cocycles
# ---------------------------------------------------------------------------


@dataclass
class Cocycle:
    """``(Delta, [[ , ]], lam)`` with provenance and optional flat data ``(perp, delta)``."""

    Delta: Map
    bracket: Bracket
    lam: Fraction = Fraction(1)
    provenance: str = "manual"
    perp: Bracket | None = None
    delta: Map | None = None

    def __post_init__(self):
        self.lam = as_fraction(self.lam)

    def plus_coboundary(self, delta: Map, provenance: str | None = None) -> "Cocycle":
        """``(Delta + d delta + delta d, [[ , ]] + L_delta)``."""
        base_D, base_b = self.Delta, self.bracket
        new_D = lambda w: base_D(w) + delta(w).d() + delta(w.d())
        new_b = lambda w, h: base_b(w, h) + leibnizator(delta, -1, w, h)
        return Cocycle(new_D, new_b, self.lam, provenance or f"{self.provenance}+coboundary")


def zero_cocycle(lam=1) -> Cocycle:
    return Cocycle(lambda w: w.zero_like(), lambda w, h: w.zero_like(), lam, "zero")


def coboundary_from_delta(delta: Map, lam=1) -> Cocycle:
    """Coboundary of a degree -1 map: ``Delta = d delta + delta d``, bracket ``L_delta``."""
    return Cocycle(
        lambda w: delta(w).d() + delta(w.d()),
        lambda w, h: leibnizator(delta, -1, w, h),
        lam,
        "coboundary",
        delta=delta,
    )


def cocycle_check(c: Cocycle, host, samples: int = 100, seed: int = 0, tol=None) -> Report:
    """Residuals of the two cocycle conditions and of ``[Delta, d] = 0``."""
    rng = random.Random(seed)
    br, D = c.bracket, c.Delta
    t1 = Tally("cocycle.c1", tol)
    t2 = Tally("cocycle.c2", tol)
    t3 = Tally("cocycle.delta_commutes_d", tol)
    for w, h, z in host.tuples(rng, 3, samples, slack=1):
        lhs = br(w * h, z) + br(w, h) * z
        rhs = br(w, h * z) + _signed(w * br(h, z), w.degree)
        t1.add(lhs - rhs, f"degrees {w.degree},{h.degree},{z.degree}")
    for w, h in host.tuples(rng, 2, samples, slack=1):
        lhs = leibnizator(D, 0, w, h)
        rhs = br(w, h).d() + br(w.d(), h) + _signed(br(w, h.d()), w.degree)
        t2.add(lhs - rhs, f"degrees {w.degree},{h.degree}")
        t3.add(D(w.d()) - D(w).d(), f"degree {w.degree}")
    report = Report("cocycle", environment={"host": host.label, "provenance": c.provenance})
    for t in (t1, t2, t3):
        report.add(t.check())
    return report


# ---------------------------------------------------------------------------
# The extension
# ---------------------------------------------------------------------------


class Extension:
    """The algebra ``Omega + Omega theta'`` of a cocycle."""

    def __init__(self, cocycle: Cocycle, host):
        self.cocycle = cocycle
        self.host = host
        self.lam = cocycle.lam

    def element(self, body, prime=None) -> "ExtElement":
        return ExtElement(self, body, body.zero_like() if prime is None else prime)

    def zero(self) -> "ExtElement":
        return self.element(self.host.zero())

    def one(self) -> "ExtElement":
        return self.element(self.host.one())

    def theta(self) -> "ExtElement":
        return ExtElement(self, self.host.zero(), self.host.one())

    def random_element(self, rng: random.Random, degree: int) -> "ExtElement":
        body = self.host.random_element(rng, degree)
        prime = self.host.random_element(rng, degree - 1) if degree >= 1 else self.host.zero()
        return ExtElement(self, body, prime)

    def tuples(self, rng: random.Random, arity: int, count: int, slack: int = 0) -> Iterator[tuple]:
        if self.host.exhaustive:
            basis = []
            for (w,) in self.host.tuples(rng, 1, 0):
                basis.append(self.element(w))
                if w.degree + 1 <= self.host.sample_degree:
                    basis.append(ExtElement(self, self.host.zero(), w))
            for combo in itertools.product(basis, repeat=arity):
                if sum(x.degree for x in combo) <= self.host.sample_degree:
                    yield combo
            return
        top = max(self.host.max_degree + 1 - slack, 0)
        for _ in range(count):
            while True:
                degrees = [rng.randint(0, self.host.max_degree) for _ in range(arity)]
                if sum(degrees) <= top:
                    break
            yield tuple(self.random_element(rng, k) for k in degrees)

    def mul(self, x: "ExtElement", y: "ExtElement") -> "ExtElement":
        lam2 = self.lam / 2
        br = self.cocycle.bracket
        body = x.body.zero_like()
        prime = x.body.zero_like()
        for m, w in x.body.parts().items():
            for n, h in y.body.parts().items():
                body = body + w * h
                prime = prime + _signed(br(w, h), m + n).scale(lam2)
            prime = prime + w * y.prime
        for n, h in y.body.parts().items():
            prime = prime + _signed(x.prime * h, n)
        return ExtElement(self, body, prime)

    def d(self, x: "ExtElement") -> "ExtElement":
        lam2 = self.lam / 2
        D = self.cocycle.Delta
        body = x.body.d()
        prime = x.prime.d()
        for m, w in x.body.parts().items():
            prime = prime - _signed(D(w), m).scale(lam2)
        return ExtElement(self, body, prime)

    def project(self, x: "ExtElement"):
        return x.body


class ExtElement:
    """``body + prime theta'``."""

    __slots__ = ("ext", "body", "prime")

    def __init__(self, ext: Extension, body, prime):
        self.ext = ext
        self.body = body
        self.prime = prime

    def zero_like(self) -> "ExtElement":
        return self.ext.zero()

    def one_like(self) -> "ExtElement":
        return self.ext.one()

    def parts(self) -> dict[int, "ExtElement"]:
        out: dict[int, ExtElement] = {}
        zero = self.body.zero_like()
        for k, w in self.body.parts().items():
            out[k] = ExtElement(self.ext, w, zero)
        for k, r in self.prime.parts().items():
            if k + 1 in out:
                out[k + 1] = ExtElement(self.ext, out[k + 1].body, r)
            else:
                out[k + 1] = ExtElement(self.ext, zero, r)
        return dict(sorted(out.items()))

    @property
    def degree(self) -> int:
        parts = self.parts()
        if len(parts) > 1:
            from .errors import Inhomogeneous

            raise Inhomogeneous("extension element has several degrees")
        return next(iter(parts), 0)

    def __add__(self, other: "ExtElement") -> "ExtElement":
        return ExtElement(self.ext, self.body + other.body, self.prime + other.prime)

    def __sub__(self, other: "ExtElement") -> "ExtElement":
        return ExtElement(self.ext, self.body - other.body, self.prime - other.prime)

    def __neg__(self) -> "ExtElement":
        return ExtElement(self.ext, -self.body, -self.prime)

    def scale(self, c) -> "ExtElement":
        return ExtElement(self.ext, self.body.scale(c), self.prime.scale(c))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return self.ext.mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def d(self) -> "ExtElement":
        return self.ext.d(self)

    def is_zero(self, tol=None) -> bool:
        return self.body.is_zero(tol) and self.prime.is_zero(tol)

    def max_abs(self) -> float:
        return max(self.body.max_abs(), self.prime.max_abs())

    def __repr__(self) -> str:
        return f"({self.body!r}) + ({self.prime!r}) theta'"


def ext_mul(c: Cocycle, x: ExtElement, y: ExtElement) -> ExtElement:
    return Extension(c, x.ext.host).mul(x, y)


def ext_d(c: Cocycle, x: ExtElement) -> ExtElement:
    return Extension(c, x.ext.host).d(x)


# ---------------------------------------------------------------------------
# Morphisms
# ---------------------------------------------------------------------------


def morphism_apply(delta: Map, x: ExtElement, target: Extension | None = None) -> ExtElement:
    """``Phi(w + r theta') = w - (lam/2) theta' delta(w) + r theta'``."""
    ext = target or x.ext
    lam2 = ext.lam / 2
    prime = x.prime
    for k, w in x.body.parts().items():
        # theta' delta(w) = (-1)^(k-1) delta(w) theta'
        prime = prime + _signed(delta(w), k).scale(lam2)
    return ExtElement(ext, x.body, prime)


def extract_delta(phi: Callable[[ExtElement], ExtElement], source: Extension) -> Map:
    """The degree -1 map of a triangle-commuting map, read off from ``phi(w) = w - (lam/2) theta' delta(w)``."""
    factor = 2 / source.lam

    def delta(w):
        total = w.zero_like()
        for k, piece in w.parts().items():
            image = phi(source.element(piece))
            total = total + _signed(image.prime, k).scale(factor)
        return total

    return delta


def morphism_check(
    delta: Map, source: Extension, target: Extension, samples: int = 50, seed: int = 0, tol=None, phi=None
) -> Report:
    """Whether ``phi`` (default ``Phi_delta``) is a morphism of extensions ``source -> target``."""
    rng = random.Random(seed)
    phi = phi or (lambda x: morphism_apply(delta, x, target))
    t_mul = Tally("morphism.product", tol)
    t_d = Tally("morphism.differential", tol)
    t_tri = Tally("morphism.triangle", tol)
    t_form = Tally("morphism.has_delta_form", tol)
    lifted = lambda x: ExtElement(target, x.body, x.prime)
    for x, y in source.tuples(rng, 2, samples, slack=1):
        t_mul.add(phi(x * y) - phi(x) * phi(y), f"degrees {x.degree},{y.degree}")
        t_d.add(phi(x.d()) - phi(x).d(), f"degree {x.degree}")
        image = phi(x)
        t_tri.add(image.body - x.body, "projection")
        theta_part = ExtElement(source, x.body.zero_like(), x.prime)
        t_tri.add(phi(theta_part) - lifted(theta_part), "inclusion")
        t_form.add(image - morphism_apply(delta, x, target), f"degree {x.degree}")
    report = Report("morphism", environment={"host": source.host.label})
    for t in (t_mul, t_d, t_tri, t_form):
        report.add(t.check())
    return report


# ---------------------------------------------------------------------------
# Reconstruction of the bracket of a cleft extension
# ---------------------------------------------------------------------------


def cleft_reconstruct(Delta: Map, host, check: bool = True) -> Bracket:
    """The unique cleft bracket with the given ``Delta``.

    ``[[a, .]] = 0``, ``[[da, h]] = L_Delta(a, h)``, extended to 1-forms by
    ``[[a w, h]] = a [[w, h]]`` and to higher forms through
    ``[[w1 h, z]] = [[w1, h z]] - w1 [[h, z]] - [[w1, h]] z`` for a 1-form ``w1``.
    With ``check`` every alternative decomposition offered by the host is
    evaluated as well and disagreement raises ``NotCleft``.
    """
    L = lambda a, h: leibnizator(Delta, 0, a, h)

    def one_form(decomposition, h):
        total = h.zero_like()
        for a, b in decomposition:
            total = total + a * L(b, h)
        return total

    def higher(splitting, h):
        total = h.zero_like()
        for w1, rest in splitting:
            total = total + bracket(w1, rest * h) - w1 * bracket(rest, h) - bracket(w1, rest) * h
        return total

    def bracket(w, h):
        total = h.zero_like()
        for k, piece in w.parts().items():
            if k == 0:
                continue
            if k == 1:
                options = host.decompositions(piece)
                value = one_form(options[0], h)
                others = [one_form(o, h) for o in options[1:]] if check else []
            else:
                options = host.splittings(piece)
                value = higher(options[0], h)
                others = [higher(o, h) for o in options[1:]] if check else []
            for other in others:
                if not (other - value).is_zero():
                    raise NotCleft(f"bracket of a degree {k} form depends on its decomposition")
            total = total + value
        return total

    return bracket


# ---------------------------------------------------------------------------
# Flat cleft extensions from (perp, delta)
# ---------------------------------------------------------------------------


def _construct_bracket(perp: Bracket, delta: Map) -> Bracket:
    def bracket(w, h):
        total = leibnizator(delta, -1, w, h)
        dh = h.d()
        for k, piece in w.parts().items():
            tail = perp(piece.d(), h) + perp(piece, h).d()
            total = total + perp(piece, dh) - _signed(tail, k)
        return total

    return bracket


def construct_flat_cleft(host, perp: Bracket, delta: Map, lam=1, samples: int = 40, seed: int = 0, tol=None) -> Cocycle:
    """Flat cleft cocycle from a degree -2 ``perp`` and a compatible ``delta``.

    The four-term identity for ``perp`` and ``delta(a w) - a delta(w) = da perp w``
    are verified on samples first.
    """
    rng = random.Random(seed)
    four = Tally("perp_four_term", tol)
    for w, h, z in host.tuples(rng, 3, samples):
        m, n = w.degree, h.degree
        lhs = _signed(perp(w * h, z), n) + perp(w, h) * z
        rhs = perp(w, h * z) + _signed(w * perp(h, z), m + n)
        four.add(lhs - rhs)
    for a in host.functions(rng, 3):
        for (w,) in host.tuples(rng, 1, 5):
            four.add(perp(a, w))
            four.add(perp(w, a))
    if not four.check().passed:
        raise PerpIdentityFails(f"perp fails the four-term identity ({four.failures} samples)")
    compat = Tally("delta_compatible", tol)
    for a in host.functions(rng, 3):
        for (w,) in host.tuples(rng, 1, samples // 4 + 1):
            compat.add(delta(a * w) - a * delta(w) - perp(a.d(), w))
    if not compat.check().passed:
        raise DeltaNotCompatible(f"delta(a w) - a delta(w) differs from da perp w ({compat.failures} samples)")
    return Cocycle(
        lambda w: delta(w).d() + delta(w.d()),
        _construct_bracket(perp, delta),
        lam,
        "construct",
        perp=perp,
        delta=delta,
    )


def flat_noncleft_cocycle(perp: Bracket, lam=1) -> Cocycle:
    """``Delta = 0`` and ``[[w, h]] = Lie_w h - (-1)^|w| (dw) perp h``."""

    def bracket(w, h):
        total = h.zero_like()
        dh = h.d()
        for k, piece in w.parts().items():
            lie = perp(piece, dh) - _signed(perp(piece, h).d(), k)
            total = total + lie - _signed(perp(piece.d(), h), k)
        return total

    return Cocycle(lambda w: w.zero_like(), bracket, lam, "flat-noncleft", perp=perp)


def perp_gauge(host, B: Map, perp: Bracket, delta: Map, samples: int = 10, seed: int = 0, tol=None):
    """Shift ``(perp, delta)`` by a degree -2 bimodule map ``B``.

    ``w perp' h = w perp h + (-1)^(|w|+1) L_B(w, h)`` and ``delta' = delta + B d - d B``.
    """
    rng = random.Random(seed)
    bimod = Tally("bimodule", tol)
    for a in host.functions(rng, 3):
        for (w,) in host.tuples(rng, 1, samples):
            bimod.add(B(a * w) - a * B(w))
            bimod.add(B(w * a) - B(w) * a)
    if not bimod.check().passed:
        raise NotBimodule(f"B is not a bimodule map ({bimod.failures} samples)")

    def new_perp(w, h):
        total = perp(w, h)
        for k, piece in w.parts().items():
            total = total + _signed(leibnizator(B, 0, piece, h), k + 1)
        return total

    def new_delta(w):
        return delta(w) + B(w.d()) - B(w).d()

    return new_perp, new_delta


# ---------------------------------------------------------------------------
# Classical and two-point instances
# ---------------------------------------------------------------------------


def classical_cleft(delta: Codifferential, host: ClassicalHost | None = None, lam=1, samples: int = 20, seed: int = 0, tol=None) -> Cocycle:
    """Flat cleft cocycle of a Riemannian metric, with ``perp`` the biderivation extension of the pairing."""
    metric = delta.metric
    host = host or ClassicalHost(metric.chart)
    perp = lambda w, h: metric_perp(w, h, metric)
    c = construct_flat_cleft(host, perp, delta, lam, samples, seed, tol)
    c.provenance = "classical"
    return c


def z2_inner_cocycle(table: PerpTable | None = None, host: TwoPointHost | None = None, lam=1) -> Cocycle:
    """The inner cocycle with ``delta = theta perp`` on two points."""
    table = table or PerpTable()
    host = host or TwoPointHost()
    perp = lambda w, h: nc_perp(table, w, h)
    delta = lambda w: nc_inner_delta(table, w)
    c = construct_flat_cleft(host, perp, delta, lam)
    c.provenance = "inner"
    return c


def classical_relations(ext: Extension, delta: Codifferential, samples: int = 20, seed: int = 0, tol=None) -> Report:
    """Commutation relations and differential of the quantised classical calculus."""
    rng = random.Random(seed)
    host = ext.host
    metric = delta.metric
    chris = delta.christoffel
    lam = ext.lam
    theta = ext.theta()
    lift = lambda w, r=None: ext.element(w, r)
    zero = host.zero()
    report = Report("relations", environment={"host": host.label, "lambda": str(lam)})
    t_comm = Tally("relations.function_oneform", tol)
    t_anti = Tally("relations.oneform_oneform", tol)
    t_theta = Tally("relations.theta_central", tol)
    t_dfun = Tally("relations.d_function", tol)
    t_done = Tally("relations.d_oneform", tol)
    for _ in range(samples):
        a = host.random_function(rng)
        w = host.random_element(rng, 1)
        h = host.random_element(rng, 1)
        A, W, H = lift(a), lift(w), lift(h)
        pairing = host.function(metric_pairing(a.d(), w, metric))
        t_comm.add(graded_commutator(A, W) - lift(zero, pairing.scale(lam)), "[a, w]")
        rhs = lie_derivative(w, h, metric) + interior(h, w.d(), metric)
        t_anti.add(graded_commutator(W, H) - lift(zero, rhs.scale(lam)), "{w, h}")
        t_theta.add(graded_commutator(A, theta), "[a, theta']")
        t_theta.add(graded_commutator(W, theta), "{w, theta'}")
        t_theta.add(theta * theta, "theta'^2")
        lb = laplace_beltrami(delta, a)
        t_dfun.add(A.d() - lift(a.d(), lb.scale(-lam / 2)), "d a")
        weitz = laplace_beltrami(delta, w) - chris.ricci_map(w)
        t_done.add(W.d() - lift(w.d(), weitz.scale(lam / 2)), "d w")
    for t in (t_comm, t_anti, t_theta, t_dfun, t_done):
        report.add(t.check())
    return report


# ---------------------------------------------------------------------------
# Verification reports
# ---------------------------------------------------------------------------


def extension_check(ext: Extension, samples: int = 100, seed: int = 0, tol=None) -> Report:
    """Associativity, Leibniz rule, ``d.^2 = 0``, centrality of ``theta'`` and the projection."""
    rng = random.Random(seed)
    theta = ext.theta()
    t_assoc = Tally("extension.associative", tol)
    t_leib = Tally("extension.leibniz", tol)
    t_dd = Tally("extension.d_squared", tol)
    t_cent = Tally("extension.theta_central", tol)
    t_proj = Tally("extension.projection", tol)
    for x, y, z in ext.tuples(rng, 3, samples, slack=1):
        t_assoc.add((x * y) * z - x * (y * z), f"degrees {x.degree},{y.degree},{z.degree}")
    for x, y in ext.tuples(rng, 2, samples, slack=1):
        t_leib.add(leibnizator(lambda u: u.d(), 1, x, y), f"degrees {x.degree},{y.degree}")
        t_dd.add(x.d().d(), f"degree {x.degree}")
        t_cent.add(theta * x - _signed(x * theta, x.degree), f"degree {x.degree}")
        t_proj.add((x * y).body - x.body * y.body, "product")
        t_proj.add(x.d().body - x.body.d(), "differential")
    t_dd.add(theta.d(), "d theta'")
    report = Report("extension", environment={"host": ext.host.label, "provenance": ext.cocycle.provenance})
    for t in (t_assoc, t_leib, t_dd, t_cent, t_proj):
        report.add(t.check())
    return report


def cleft_check(c: Cocycle, host, samples: int = 50, seed: int = 0, tol=None) -> Report:
    """Cleftness and its consequences for the bracket."""
    rng = random.Random(seed)
    br, D = c.bracket, c.Delta
    L = lambda w, h: leibnizator(D, 0, w, h)
    t_cleft = Tally("cleft.functions_bracket_zero", tol)
    t_l0 = Tally("cleft.l0", tol)
    t_l1 = Tally("cleft.l1", tol)
    t_l2 = Tally("cleft.l2", tol)
    t_l3 = Tally("cleft.l3", tol)
    t_l00 = Tally("cleft.l00", tol)
    functions = host.functions(rng, 4)
    for a in functions:
        for w, h in host.tuples(rng, 2, max(samples // len(functions), 1), slack=1):
            t_cleft.add(br(a, h), "[[a, h]]")
            t_l0.add(L(a, h) - br(a.d(), h))
            t_l1.add(br(a * w, h) - a * br(w, h))
            t_l2.add(br(w * a, h) + br(w, a) * h - br(w, a * h))
            t_l3.add(br(w * h, a) + br(w, h) * a - br(w, h * a) - _signed(w * br(h, a), w.degree))
            rhs = br(w, a).d() + br(w.d(), a) + _signed(br(w, a.d()), w.degree)
            t_l00.add(L(w, a) - rhs)
    report = Report("cleft", environment={"host": host.label, "provenance": c.provenance})
    for t in (t_cleft, t_l0, t_l1, t_l2, t_l3, t_l00):
        report.add(t.check())
    return report


def connection_check(c: Cocycle, host, samples: int = 30, seed: int = 0, tol=None, classical: bool = False) -> Report:
    """Covariant derivative ``nabla_w = 1/2 [[w, .]]`` along 1-forms: covariance, bimodule rule, symmetry."""
    rng = random.Random(seed)
    br = c.bracket
    nab = lambda w, h: br(w, h).scale(HALF)

    def j(w, z):
        # j_w(a db) = 1/2 [[w a, b]]
        total = w.zero_like()
        for a, b in host.decompositions(z)[0]:
            total = total + br(w * a, b).scale(HALF)
        return total

    t_cov = Tally("connection.left_covariant", tol)
    t_bimod = Tally("connection.bimodule", tol)
    t_sym = Tally("connection.symmetric_part", tol)
    functions = host.functions(rng, 3)
    for a in functions:
        for _ in range(max(samples // len(functions), 1)):
            w = host.random_element(rng, 1)
            h = host.random_element(rng, rng.randint(0, min(2, host.max_degree)))
            t_cov.add(nab(a * w, h) - a * nab(w, h), "nabla_{a w}")
            t_cov.add(nab(w, a * h) - nab(w * a, h) - j(w, a.d()) * h, "nabla_w(a h)")
            da = a.d()
            sigma = j(w * h, da) + w * j(h, da)
            t_bimod.add(nab(w, h * a) - nab(w, h) * a - sigma, "nabla_w(h a)")
            if classical:
                v = host.random_element(rng, 1)
                lhs = nab(w, v) + nab(v, w)
                rhs = j(w.d(), v) + j(v.d(), w) + j(w, v).d()
                t_sym.add(lhs - rhs, "symmetric part")
    report = Report("connection", environment={"host": host.label})
    checks = (t_cov, t_bimod, t_sym) if classical else (t_cov, t_bimod)
    for t in checks:
        report.add(t.check())
    return report


def reconstruct_check(c: Cocycle, host, samples: int = 30, seed: int = 0, tol=None) -> Report:
    """``cleft_reconstruct(Delta)`` reproduces the bracket."""
    rng = random.Random(seed)
    rebuilt = cleft_reconstruct(c.Delta, host)
    t = Tally("reconstruct.round_trip", tol)
    for w, h in host.tuples(rng, 2, samples, slack=1):
        t.add(rebuilt(w, h) - c.bracket(w, h), f"degrees {w.degree},{h.degree}")
    report = Report("reconstruct", environment={"host": host.label})
    report.add(t.check())
    return report


# ---------------------------------------------------------------------------
# The extension by theta' and d theta'
# ---------------------------------------------------------------------------


class Extension2:
    """``Omega + Omega theta' + Omega d theta'`` for a flat cleft cocycle carrying ``(perp, delta)``."""

    def __init__(self, cocycle: Cocycle, host):
        if cocycle.perp is None or cocycle.delta is None:
            raise ValueError("the cocycle must carry its perp and delta")
        self.cocycle = cocycle
        self.host = host
        self.lam = cocycle.lam
        self.base = Extension(cocycle, host)

    def element(self, body, prime=None, dprime=None) -> "Ext2Element":
        z = body.zero_like()
        return Ext2Element(self, body, z if prime is None else prime, z if dprime is None else dprime)

    def zero(self) -> "Ext2Element":
        return self.element(self.host.zero())

    def one(self) -> "Ext2Element":
        return self.element(self.host.one())

    def theta(self) -> "Ext2Element":
        return Ext2Element(self, self.host.zero(), self.host.one(), self.host.zero())

    def dtheta(self) -> "Ext2Element":
        return Ext2Element(self, self.host.zero(), self.host.zero(), self.host.one())

    def random_element(self, rng: random.Random, degree: int) -> "Ext2Element":
        h = self.host
        body = h.random_element(rng, degree)
        prime = h.random_element(rng, degree - 1) if degree >= 1 else h.zero()
        dprime = h.random_element(rng, degree - 2) if degree >= 2 else h.zero()
        return Ext2Element(self, body, prime, dprime)

    def tuples(self, rng: random.Random, arity: int, count: int, slack: int = 0) -> Iterator[tuple]:
        host = self.host
        if host.exhaustive:
            basis = []
            z = host.zero()
            for (w,) in host.tuples(rng, 1, 0):
                k = w.degree
                basis.append(self.element(w))
                if k + 1 <= host.sample_degree:
                    basis.append(Ext2Element(self, z, w, z))
                if k + 2 <= host.sample_degree:
                    basis.append(Ext2Element(self, z, z, w))
            for combo in itertools.product(basis, repeat=arity):
                if sum(x.degree for x in combo) <= host.sample_degree:
                    yield combo
            return
        top = max(host.max_degree + 1 - slack, 0)
        for _ in range(count):
            while True:
                degrees = [rng.randint(0, host.max_degree) for _ in range(arity)]
                if sum(degrees) <= top:
                    break
            yield tuple(self.random_element(rng, k) for k in degrees)

    def mul(self, x: "Ext2Element", y: "Ext2Element") -> "Ext2Element":
        lam2 = self.lam / 2
        br, perp = self.cocycle.bracket, self.cocycle.perp
        z = x.body.zero_like()
        body, prime, dprime = z, z, z
        for m, w in x.body.parts().items():
            for n, h in y.body.parts().items():
                body = body + w * h
                prime = prime + _signed(br(w, h), m + n).scale(lam2)
                dprime = dprime - _signed(perp(w, h), m).scale(lam2)
            prime = prime + w * y.prime
            dprime = dprime + w * y.dprime
        for n, h in y.body.parts().items():
            prime = prime + _signed(x.prime * h, n)
            dprime = dprime + x.dprime * h
        return Ext2Element(self, body, prime, dprime)

    def d(self, x: "Ext2Element") -> "Ext2Element":
        lam2 = self.lam / 2
        D, delta = self.cocycle.Delta, self.cocycle.delta
        body = x.body.d()
        prime = x.prime.d()
        dprime = x.dprime.d()
        for m, w in x.body.parts().items():
            prime = prime - _signed(D(w), m).scale(lam2)
            dprime = dprime + delta(w).scale(lam2)
        for k, r in x.prime.parts().items():
            dprime = dprime + _signed(r, k)
        return Ext2Element(self, body, prime, dprime)

    def to_extension(self, x: "Ext2Element") -> ExtElement:
        """Set ``d theta' = 0``."""
        return ExtElement(self.base, x.body, x.prime)


class Ext2Element:
    """``body + prime theta' + dprime d theta'``."""

    __slots__ = ("ext", "body", "prime", "dprime")

    def __init__(self, ext: Extension2, body, prime, dprime):
        self.ext = ext
        self.body = body
        self.prime = prime
        self.dprime = dprime

    def zero_like(self) -> "Ext2Element":
        return self.ext.zero()

    def one_like(self) -> "Ext2Element":
        return self.ext.one()

    def parts(self) -> dict[int, "Ext2Element"]:
        z = self.body.zero_like()
        out: dict[int, list] = {}
        for slot, (shift, value) in enumerate(((0, self.body), (1, self.prime), (2, self.dprime))):
            for k, piece in value.parts().items():
                out.setdefault(k + shift, [z, z, z])[slot] = piece
        return {k: Ext2Element(self.ext, *v) for k, v in sorted(out.items())}

    @property
    def degree(self) -> int:
        parts = self.parts()
        if len(parts) > 1:
            from .errors import Inhomogeneous

            raise Inhomogeneous("extension element has several degrees")
        return next(iter(parts), 0)

    def __add__(self, other: "Ext2Element") -> "Ext2Element":
        return Ext2Element(self.ext, self.body + other.body, self.prime + other.prime, self.dprime + other.dprime)

    def __sub__(self, other: "Ext2Element") -> "Ext2Element":
        return Ext2Element(self.ext, self.body - other.body, self.prime - other.prime, self.dprime - other.dprime)

    def __neg__(self) -> "Ext2Element":
        return Ext2Element(self.ext, -self.body, -self.prime, -self.dprime)

    def scale(self, c) -> "Ext2Element":
        return Ext2Element(self.ext, self.body.scale(c), self.prime.scale(c), self.dprime.scale(c))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return self.ext.mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def d(self) -> "Ext2Element":
        return self.ext.d(self)

    def is_zero(self, tol=None) -> bool:
        return self.body.is_zero(tol) and self.prime.is_zero(tol) and self.dprime.is_zero(tol)

    def max_abs(self) -> float:
        return max(self.body.max_abs(), self.prime.max_abs(), self.dprime.max_abs())

    def __repr__(self) -> str:
        return f"({self.body!r}) + ({self.prime!r}) theta' + ({self.dprime!r}) dtheta'"


def ext2_mul(data: Cocycle, x: Ext2Element, y: Ext2Element) -> Ext2Element:
    return Extension2(data, x.ext.host).mul(x, y)


def ext2_d(data: Cocycle, x: Ext2Element) -> Ext2Element:
    return Extension2(data, x.ext.host).d(x)


def ext2_check(ext: Extension2, samples: int = 100, seed: int = 0, tol=None) -> Report:
    """DGA laws of the larger extension and the two successive surjections."""
    rng = random.Random(seed)
    theta, dtheta = ext.theta(), ext.dtheta()
    t_assoc = Tally("ext2.associative", tol)
    t_leib = Tally("ext2.leibniz", tol)
    t_dd = Tally("ext2.d_squared", tol)
    t_cent = Tally("ext2.theta_central", tol)
    t_rel = Tally("ext2.theta_relations", tol)
    t_p1 = Tally("ext2.surjection_to_extension", tol)
    t_p2 = Tally("ext2.surjection_to_host", tol)
    for x, y, z in ext.tuples(rng, 3, samples, slack=1):
        t_assoc.add((x * y) * z - x * (y * z), f"degrees {x.degree},{y.degree},{z.degree}")
    to1 = ext.to_extension
    for x, y in ext.tuples(rng, 2, samples, slack=1):
        t_leib.add(leibnizator(lambda u: u.d(), 1, x, y), f"degrees {x.degree},{y.degree}")
        t_dd.add(x.d().d(), f"degree {x.degree}")
        t_cent.add(theta * x - _signed(x * theta, x.degree), "theta'")
        t_cent.add(dtheta * x - x * dtheta, "d theta'")
        t_p1.add(to1(x * y) - to1(x) * to1(y), "product")
        t_p1.add(to1(x.d()) - to1(x).d(), "differential")
        t_p2.add((x * y).body - x.body * y.body, "product")
        t_p2.add(x.d().body - x.body.d(), "differential")
    t_rel.add(theta * theta, "theta'^2")
    t_rel.add(theta * dtheta, "theta' d theta'")
    t_rel.add(dtheta * theta, "d theta' theta'")
    t_rel.add(theta.d() - dtheta, "d. theta'")
    report = Report("ext2", environment={"host": ext.host.label, "provenance": ext.cocycle.provenance})
    for t in (t_assoc, t_leib, t_dd, t_cent, t_rel, t_p1, t_p2):
        report.add(t.check())
    return report
