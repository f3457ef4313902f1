"""Coefficient algebras for differential forms.

Three kinds of scalars are provided:

* ``RationalFn``: exact multivariate rational functions over Q, kept in
  lowest terms with a monic denominator (graded lex order).
* ``Jet``: truncated Taylor expansions at a base point with high precision
  binary floating point coefficients.  Used for transcendental metrics.
* ``TwoPointFn``: functions on the two point set {x, y}, i.e. Q x Q with the
  swap automorphism.  This algebra has no derivations.

All scalar elements share a small protocol: ring arithmetic with ints and
Fractions, ``is_zero()``, ``max_abs()``, ``partial(i)`` and ``inverse()``.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import flint
import gmpy2

from .errors import (
    CalculusError,
    MixedRing,
    NoDerivations,
    NotInvertible,
    NotPositive,
    SqrtUnavailable,
    TruncationExhausted,
)

__all__ = [
    "RationalRing",
    "RationalFn",
    "JetRing",
    "Jet",
    "TwoPointRing",
    "TwoPointFn",
    "TWO_POINT",
    "sin",
    "cos",
    "exp",
    "sqrt",
    "as_fraction",
]

Number = (int, Fraction)


def as_fraction(value) -> Fraction:
    """Convert ints, Fractions and numeric strings like ``"3/4"`` to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {value!r} to an exact rational")


def _fmpq(value: Fraction) -> flint.fmpq:
    return flint.fmpq(value.numerator, value.denominator)


# ---------------------------------------------------------------------------
# Exact rational functions
# ---------------------------------------------------------------------------


class RationalRing:
    """The field Q(x_1, ..., x_n) with named variables."""

    exact = True

    def __init__(self, names: Sequence[str]):
        self.names = tuple(names)
        self.nvars = len(self.names)
        self._ctx = flint.fmpq_mpoly_ctx.get(self.names, "deglex")
        self._one_poly = self._ctx.from_dict({(0,) * self.nvars: 1})
        self._zero = RationalFn(self, self._ctx.from_dict({}), self._one_poly, _raw=True)
        self._one = RationalFn(self, self._one_poly, self._one_poly, _raw=True)

    def __repr__(self) -> str:
        return f"RationalRing({', '.join(self.names)})"

    def zero(self) -> "RationalFn":
        return self._zero

    def one(self) -> "RationalFn":
        return self._one

    def const(self, value) -> "RationalFn":
        value = as_fraction(value)
        if value == 0:
            return self._zero
        poly = self._ctx.from_dict({(0,) * self.nvars: _fmpq(value)})
        return RationalFn(self, poly, self._one_poly, _raw=True)

    __call__ = const

    def variable(self, index: int) -> "RationalFn":
        exps = [0] * self.nvars
        exps[index] = 1
        return RationalFn(self, self._ctx.from_dict({tuple(exps): 1}), self._one_poly, _raw=True)

    def polynomial(self, terms: dict[tuple[int, ...], object]) -> "RationalFn":
        """Build a polynomial from ``{exponent tuple: rational coefficient}``."""
        data = {tuple(k): _fmpq(as_fraction(v)) for k, v in terms.items() if as_fraction(v) != 0}
        return RationalFn(self, self._ctx.from_dict(data), self._one_poly, _raw=True)


class RationalFn:
    """A rational function num/den in canonical form."""

    __slots__ = ("ring", "num", "den")

    def __init__(self, ring: RationalRing, num, den, _raw: bool = False):
        self.ring = ring
        if not _raw:
            if den.is_zero():
                raise NotInvertible("zero denominator")
            if num.is_zero():
                num, den = num, ring._one_poly
            elif not den.is_constant():
                g = num.gcd(den)
                if not g.is_one():
                    num = num / g
                    den = den / g
            lc = den.leading_coefficient()
            if lc != 1:
                num = num / lc
                den = den / lc
        self.num = num
        self.den = den

    # coercion --------------------------------------------------------------
    def _coerce(self, other) -> "RationalFn":
        if isinstance(other, RationalFn):
            if other.ring is not self.ring:
                raise MixedRing("rational functions from different rings")
            return other
        if isinstance(other, Number):
            return self.ring.const(other)
        return NotImplemented

    # arithmetic ------------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RationalFn(self.ring, self.num + other.num, self.den, _raw=self.den.is_one())
        return RationalFn(self.ring, self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFn(self.ring, -self.num, self.den, _raw=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, Number):
            if other == 0:
                return self.ring.zero()
            return RationalFn(self.ring, self.num * _fmpq(as_fraction(other)), self.den, _raw=True)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den.is_one() and other.den.is_one():
            return RationalFn(self.ring, self.num * other.num, self.den, _raw=True)
        return RationalFn(self.ring, self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return RationalFn(self.ring, self.num**exponent, self.den**exponent, _raw=True)

    def inverse(self) -> "RationalFn":
        if self.num.is_zero():
            raise NotInvertible("zero has no inverse")
        return RationalFn(self.ring, self.den, self.num)

    # calculus --------------------------------------------------------------
    def partial(self, index: int) -> "RationalFn":
        dn = self.num.derivative(index)
        if self.den.is_constant():
            return RationalFn(self.ring, dn, self.den, _raw=True)
        dd = self.den.derivative(index)
        return RationalFn(self.ring, dn * self.den - self.num * dd, self.den * self.den)

    def sqrt(self) -> "RationalFn":
        """Exact square root, or ``SqrtUnavailable`` when none exists."""
        try:
            n = self.num.sqrt()
            d = self.den.sqrt()
        except Exception as exc:  # flint raises ValueError for non-squares
            raise SqrtUnavailable(f"{self} is not a perfect square") from exc
        root = RationalFn(self.ring, n, d)
        if root.num.leading_coefficient() < 0:
            root = -root
        return root

    # predicates ------------------------------------------------------------
    def is_zero(self, tol=None) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise CalculusError("not a constant")
        n = self.num.to_dict().get((0,) * self.ring.nvars, 0)
        d = self.den.to_dict()[(0,) * self.ring.nvars]
        q = flint.fmpq(n) / flint.fmpq(d)
        return Fraction(int(q.p), int(q.q))

    def max_abs(self) -> float:
        if self.num.is_zero():
            return 0.0
        top = max(abs(float(c)) for c in self.num.coeffs())
        bottom = max(abs(float(c)) for c in self.den.coeffs())
        return top / bottom

    def evaluate(self, point: Sequence) -> Fraction:
        args = [_fmpq(as_fraction(p)) for p in point]
        d = self.den(*args)
        if d == 0:
            raise NotInvertible("denominator vanishes at the evaluation point")
        q = self.num(*args) / d
        return Fraction(int(q.p), int(q.q))

    def __eq__(self, other) -> bool:
        try:
            other = self._coerce(other)
        except MixedRing:
            return False
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((str(self.num), str(self.den)))

    def __str__(self) -> str:
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"RationalFn({self})"


# ---------------------------------------------------------------------------
# Truncated Taylor jets
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _monomials(nvars: int, order: int) -> tuple[tuple[int, ...], ...]:
    out: list[tuple[int, ...]] = []
    for total in range(order + 1):
        level = []
        for combo in itertools.combinations_with_replacement(range(nvars), total):
            exps = [0] * nvars
            for v in combo:
                exps[v] += 1
            level.append(tuple(exps))
        out.extend(sorted(level, reverse=True))
    return tuple(out)


class JetRing:
    """Jets of order ``order`` at ``base`` in ``len(names)`` variables.

    Coefficients are Taylor coefficients, so a jet stores ``c[alpha]`` with
    ``f(base + u) = sum c[alpha] u^alpha + O(|u|^(order+1))``.  Each jet also
    carries its own order, which drops by one under differentiation; binary
    operations keep the smaller order.
    """

    exact = False

    def __init__(
        self,
        names: Sequence[str],
        base: Sequence,
        order: int = 4,
        precision: int = 192,
        eps=Fraction(1, 10**20),
    ):
        if len(base) != len(names):
            raise ValueError("base point dimension does not match the variables")
        if order < 0:
            raise ValueError("jet order must be non-negative")
        self.names = tuple(names)
        self.nvars = len(self.names)
        self.base = tuple(as_fraction(b) for b in base)
        self.order = order
        self.precision = precision
        self.ctx = gmpy2.context(precision=precision)
        self.eps = self.num(as_fraction(eps))
        self.monomials = _monomials(self.nvars, order)
        self.index = {m: i for i, m in enumerate(self.monomials)}
        self._sizes = [
            sum(1 for m in self.monomials if sum(m) <= k) for k in range(order + 1)
        ]
        self._mul_tables: dict[int, list[tuple[int, int, int]]] = {}
        self._partial_tables: dict[tuple[int, int], list[tuple[int, int, int]]] = {}
        self._zero_mp = gmpy2.mpfr(0, precision)

    def __repr__(self) -> str:
        base = ", ".join(str(b) for b in self.base)
        return f"JetRing(({', '.join(self.names)}) at ({base}), order={self.order})"

    # helpers ---------------------------------------------------------------
    def num(self, value):
        """Convert an exact number to a working precision float."""
        if isinstance(value, int):
            return gmpy2.mpfr(value, self.precision)
        if isinstance(value, Fraction):
            return self.ctx.div(
                gmpy2.mpfr(value.numerator, self.precision), gmpy2.mpfr(value.denominator, self.precision)
            )
        return gmpy2.mpfr(value, self.precision)

    def size(self, order: int) -> int:
        return self._sizes[order]

    def mul_table(self, order: int) -> list[tuple[int, int, int]]:
        table = self._mul_tables.get(order)
        if table is None:
            table = []
            n = self._sizes[order]
            for i in range(n):
                mi = self.monomials[i]
                for j in range(n):
                    mj = self.monomials[j]
                    if sum(mi) + sum(mj) <= order:
                        k = self.index[tuple(a + b for a, b in zip(mi, mj))]
                        table.append((i, j, k))
            self._mul_tables[order] = table
        return table

    def partial_table(self, var: int, order: int) -> list[tuple[int, int, int]]:
        """Entries ``(source, target, factor)`` for differentiating an order ``order`` jet."""
        key = (var, order)
        table = self._partial_tables.get(key)
        if table is None:
            table = []
            for t in range(self._sizes[order - 1]):
                m = list(self.monomials[t])
                m[var] += 1
                table.append((self.index[tuple(m)], t, m[var]))
            self._partial_tables[key] = table
        return table

    # constructors ----------------------------------------------------------
    def const(self, value) -> "Jet":
        coeffs = [self._zero_mp] * self._sizes[self.order]
        coeffs[0] = self.num(as_fraction(value) if isinstance(value, (int, Fraction, str)) else value)
        return Jet(self, self.order, tuple(coeffs))

    __call__ = const

    def zero(self) -> "Jet":
        return self.const(0)

    def one(self) -> "Jet":
        return self.const(1)

    def variable(self, index: int) -> "Jet":
        coeffs = [self._zero_mp] * self._sizes[self.order]
        coeffs[0] = self.num(self.base[index])
        if self.order >= 1:
            exps = [0] * self.nvars
            exps[index] = 1
            coeffs[self.index[tuple(exps)]] = self.num(1)
        return Jet(self, self.order, tuple(coeffs))


class Jet:
    """A truncated Taylor expansion; see ``JetRing``."""

    __slots__ = ("ring", "order", "coeffs")

    def __init__(self, ring: JetRing, order: int, coeffs: tuple):
        self.ring = ring
        self.order = order
        self.coeffs = coeffs

    def _coerce(self, other) -> "Jet":
        if isinstance(other, Jet):
            if other.ring is not self.ring:
                raise MixedRing("jets from different rings")
            return other
        if isinstance(other, Number):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        order = min(self.order, other.order)
        add = self.ring.ctx.add
        n = self.ring.size(order)
        return Jet(self.ring, order, tuple(add(a, b) for a, b in zip(self.coeffs[:n], other.coeffs[:n])))

    __radd__ = __add__

    def __neg__(self):
        neg = self.ring.ctx.minus
        return Jet(self.ring, self.order, tuple(neg(a) for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        order = min(self.order, other.order)
        sub = self.ring.ctx.sub
        n = self.ring.size(order)
        return Jet(self.ring, order, tuple(sub(a, b) for a, b in zip(self.coeffs[:n], other.coeffs[:n])))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        ctx = self.ring.ctx
        if isinstance(other, Number):
            c = self.ring.num(as_fraction(other))
            return Jet(self.ring, self.order, tuple(ctx.mul(a, c) for a in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        order = min(self.order, other.order)
        out = [self.ring._zero_mp] * self.ring.size(order)
        a, b = self.coeffs, other.coeffs
        mul, add = ctx.mul, ctx.add
        for i, j, k in self.ring.mul_table(order):
            out[k] = add(out[k], mul(a[i], b[j]))
        return Jet(self.ring, order, tuple(out))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = self.ring.one()
        for _ in range(exponent):
            result = result * self
        return result

    # series composition -----------------------------------------------------
    def _compose(self, taylor: list) -> "Jet":
        """Evaluate ``sum taylor[k] h^k`` where ``h = self - self(base)``."""
        ctx = self.ring.ctx
        h = Jet(self.ring, self.order, (self.ring._zero_mp,) + self.coeffs[1:])
        result = self.ring.const(taylor[self.order])
        result = Jet(self.ring, self.order, result.coeffs)
        for k in range(self.order - 1, -1, -1):
            result = result * h
            c0 = ctx.add(result.coeffs[0], taylor[k])
            result = Jet(self.ring, self.order, (c0,) + result.coeffs[1:])
        return result

    def _factorials(self) -> list:
        ctx = self.ring.ctx
        out = [self.ring.num(1)]
        for k in range(1, self.order + 1):
            out.append(ctx.mul(out[-1], k))
        return out

    def inverse(self) -> "Jet":
        ctx = self.ring.ctx
        c0 = self.coeffs[0]
        if abs(c0) <= self.ring.eps:
            raise NotInvertible("jet with vanishing value has no inverse")
        taylor = []
        power = ctx.div(1, c0)
        for k in range(self.order + 1):
            taylor.append(power if k % 2 == 0 else ctx.minus(power))
            power = ctx.div(power, c0)
        return self._compose(taylor)

    def sqrt(self) -> "Jet":
        ctx = self.ring.ctx
        c0 = self.coeffs[0]
        if c0 <= self.ring.eps:
            raise NotPositive("square root of a jet with non-positive value")
        root = ctx.sqrt(c0)
        taylor = []
        binom = Fraction(1)
        power = root
        for k in range(self.order + 1):
            taylor.append(ctx.mul(power, self.ring.num(binom)))
            binom = binom * (Fraction(1, 2) - k) / (k + 1)
            power = ctx.div(power, c0)
        return self._compose(taylor)

    def exp(self) -> "Jet":
        ctx = self.ring.ctx
        e = ctx.exp(self.coeffs[0])
        facts = self._factorials()
        return self._compose([ctx.div(e, f) for f in facts])

    def _trig(self, shift: int) -> "Jet":
        ctx = self.ring.ctx
        s, c = ctx.sin(self.coeffs[0]), ctx.cos(self.coeffs[0])
        cycle = [s, c, ctx.minus(s), ctx.minus(c)]
        facts = self._factorials()
        return self._compose([ctx.div(cycle[(k + shift) % 4], facts[k]) for k in range(self.order + 1)])

    def sin(self) -> "Jet":
        return self._trig(0)

    def cos(self) -> "Jet":
        return self._trig(1)

    # calculus --------------------------------------------------------------
    def partial(self, index: int) -> "Jet":
        if self.order == 0:
            raise TruncationExhausted("cannot differentiate an order 0 jet")
        ctx = self.ring.ctx
        out = [self.ring._zero_mp] * self.ring.size(self.order - 1)
        for src, dst, factor in self.ring.partial_table(index, self.order):
            out[dst] = ctx.mul(self.coeffs[src], factor)
        return Jet(self.ring, self.order - 1, tuple(out))

    # inspection ------------------------------------------------------------
    def value(self):
        return self.coeffs[0]

    def coefficient(self, exponents: Sequence[int]):
        return self.coeffs[self.ring.index[tuple(exponents)]]

    def truncate(self, order: int) -> "Jet":
        order = min(order, self.order)
        return Jet(self.ring, order, self.coeffs[: self.ring.size(order)])

    def is_zero(self, tol=None) -> bool:
        eps = self.ring.eps if tol is None else self.ring.num(as_fraction(tol)) if isinstance(tol, Number) else tol
        return all(abs(c) <= eps for c in self.coeffs)

    def max_abs(self) -> float:
        return float(max(abs(c) for c in self.coeffs))

    def __eq__(self, other) -> bool:
        try:
            other = self._coerce(other)
        except MixedRing:
            return False
        if other is NotImplemented:
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        parts = []
        for m, c in zip(self.ring.monomials, self.coeffs):
            if c != 0:
                parts.append(f"{float(c):.12g}*u^{m}")
        return f"Jet(order={self.order}: {' + '.join(parts) or '0'})"


# ---------------------------------------------------------------------------
# Functions on two points
# ---------------------------------------------------------------------------


class TwoPointRing:
    """Functions on {x, y}; a singleton ring instance ``TWO_POINT``."""

    exact = True
    nvars = 0

    def const(self, value) -> "TwoPointFn":
        v = as_fraction(value)
        return TwoPointFn(v, v)

    __call__ = const

    def zero(self) -> "TwoPointFn":
        return TwoPointFn(Fraction(0), Fraction(0))

    def one(self) -> "TwoPointFn":
        return TwoPointFn(Fraction(1), Fraction(1))

    def delta(self, point: str) -> "TwoPointFn":
        """Indicator function of ``point`` ('x' or 'y')."""
        return TwoPointFn(1, 0) if point == "x" else TwoPointFn(0, 1)

    def basis(self) -> tuple["TwoPointFn", "TwoPointFn"]:
        return (self.delta("x"), self.delta("y"))

    def __repr__(self) -> str:
        return "TwoPointRing()"


TWO_POINT = TwoPointRing()


class TwoPointFn:
    """A pair of rationals ``(f(x), f(y))`` with the swap ``bar``."""

    __slots__ = ("x", "y")
    ring = TWO_POINT

    def __init__(self, x, y):
        self.x = as_fraction(x)
        self.y = as_fraction(y)

    def _coerce(self, other):
        if isinstance(other, TwoPointFn):
            return other
        if isinstance(other, Number):
            return TWO_POINT.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return TwoPointFn(self.x + other.x, self.y + other.y)

    __radd__ = __add__

    def __neg__(self):
        return TwoPointFn(-self.x, -self.y)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return TwoPointFn(self.x - other.x, self.y - other.y)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return TwoPointFn(self.x * other.x, self.y * other.y)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def inverse(self) -> "TwoPointFn":
        if self.x == 0 or self.y == 0:
            raise NotInvertible(f"{self} vanishes at a point")
        return TwoPointFn(1 / self.x, 1 / self.y)

    def bar(self) -> "TwoPointFn":
        """The swap automorphism ``f -> f o swap``."""
        return TwoPointFn(self.y, self.x)

    def bar_power(self, n: int) -> "TwoPointFn":
        return self.bar() if n % 2 else self

    def partial(self, index: int):
        raise NoDerivations("functions on two points have no partial derivatives")

    def is_zero(self, tol=None) -> bool:
        return self.x == 0 and self.y == 0

    def max_abs(self) -> float:
        return float(max(abs(self.x), abs(self.y)))

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.y))

    def __repr__(self) -> str:
        return f"TwoPointFn({self.x}, {self.y})"

    def __str__(self) -> str:
        return f"({self.x}, {self.y})"


# ---------------------------------------------------------------------------
# Elementary functions (jets only; exact square roots allowed)
# ---------------------------------------------------------------------------


def _exact_only(name: str):
    raise CalculusError(f"{name} is only available for jet coefficients")


def sin(value):
    if isinstance(value, Jet):
        return value.sin()
    _exact_only("sin")


def cos(value):
    if isinstance(value, Jet):
        return value.cos()
    _exact_only("cos")


def exp(value):
    if isinstance(value, Jet):
        return value.exp()
    _exact_only("exp")


def sqrt(value):
    if isinstance(value, (Jet, RationalFn)):
        return value.sqrt()
    _exact_only("sqrt")


def product(values: Iterable, one):
    out = one
    for v in values:
        out = out * v
    return out
