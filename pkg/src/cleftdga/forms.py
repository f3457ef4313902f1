"""Differential forms on a single coordinate chart.

A ``Form`` is a finite sum ``sum_I c_I dx^I`` with strictly increasing index
tuples ``I`` and coefficients from the chart's scalar ring.  Products are the
wedge product, ``Form.d()`` is the exterior derivative and ``contract(i, w)``
is the interior product with the coordinate vector field ``d/dx^i``.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

from .coefficients import Jet, JetRing, RationalFn, RationalRing, as_fraction
from .errors import ChartMismatch, DegreeError, Inhomogeneous

__all__ = [
    "Chart",
    "Form",
    "TensorForm",
    "wedge",
    "exterior_d",
    "contract",
    "leibnizator",
    "tensor",
    "merge_indices",
    "homogeneous_parts",
    "graded_commutator",
]

Number = (int, Fraction)
Index = tuple[int, ...]


@lru_cache(maxsize=None)
def merge_indices(left: Index, right: Index) -> tuple[int, Index] | None:
    """Sign and sorted index of ``dx^left ^ dx^right``; None if they overlap."""
    if set(left) & set(right):
        return None
    inversions = 0
    for j in right:
        inversions += sum(1 for i in left if i > j)
    merged = tuple(sorted(left + right))
    return (-1 if inversions % 2 else 1), merged


@lru_cache(maxsize=None)
def remove_position(index: Index, position: int) -> tuple[int, Index]:
    """Sign ``(-1)^position`` and the index with that slot removed."""
    return (-1 if position % 2 else 1), index[:position] + index[position + 1 :]


class Chart:
    """A coordinate chart: variable names plus a scalar ring."""

    def __init__(self, ring: RationalRing | JetRing):
        self.ring = ring
        self.names = ring.names
        self.dim = ring.nvars
        self._coords = [ring.variable(i) for i in range(self.dim)]

    def __repr__(self) -> str:
        return f"Chart({self.ring!r})"

    @property
    def exact(self) -> bool:
        return self.ring.exact

    # constructors ----------------------------------------------------------
    def zero(self) -> "Form":
        return Form(self, {})

    def one(self) -> "Form":
        return Form(self, {(): self.ring.one()})

    def scalar(self, value) -> "Form":
        if isinstance(value, Number) or isinstance(value, str):
            value = self.ring.const(as_fraction(value))
        return Form(self, {(): value})

    def coordinate(self, i: int):
        """The coordinate function ``x^i`` as a ring element."""
        return self._coords[i]

    def dx(self, i: int) -> "Form":
        return Form(self, {(i,): self.ring.one()})

    def basis(self, index: Sequence[int]) -> "Form":
        index = tuple(index)
        if list(index) != sorted(set(index)):
            raise ValueError(f"basis index {index} must be strictly increasing")
        return Form(self, {index: self.ring.one()})

    def form(self, components: Mapping[Sequence[int], object]) -> "Form":
        out = self.zero()
        for idx, c in components.items():
            idx = tuple(idx)
            if isinstance(c, Number):
                c = self.ring.const(c)
            # allow unsorted indices by going through the wedge product
            term = self.scalar(c)
            for i in idx:
                term = term * self.dx(i)
            out = out + term
        return out

    def indices(self, degree: int) -> list[Index]:
        return list(itertools.combinations(range(self.dim), degree))

    def volume(self) -> "Form":
        return self.basis(range(self.dim))

    # sampling --------------------------------------------------------------
    def random_function(self, rng: random.Random, max_degree: int = 2, bound: int = 3):
        """Polynomial in the coordinates with small random integer coefficients."""
        out = self.ring.zero()
        for total in range(max_degree + 1):
            for combo in itertools.combinations_with_replacement(range(self.dim), total):
                c = rng.randint(-bound, bound)
                if c == 0:
                    continue
                term = self.ring.const(c)
                for v in combo:
                    term = term * self._coords[v]
                out = out + term
        return out

    def random_form(self, rng: random.Random, degree: int, max_degree: int = 2, bound: int = 3) -> "Form":
        comps = {}
        for idx in self.indices(degree):
            comps[idx] = self.random_function(rng, max_degree, bound)
        return Form(self, comps)


class Form:
    """An element of the exterior algebra over a chart."""

    __slots__ = ("chart", "comps")

    def __init__(self, chart: Chart, comps: Mapping[Index, object]):
        self.chart = chart
        self.comps = {k: v for k, v in comps.items() if not v.is_zero()}

    @classmethod
    def _raw(cls, chart: Chart, comps: dict) -> "Form":
        obj = cls.__new__(cls)
        obj.chart = chart
        obj.comps = comps
        return obj

    # protocol helpers ------------------------------------------------------
    def _check(self, other: "Form") -> None:
        if other.chart is not self.chart:
            raise ChartMismatch("forms live on different charts")

    def zero_like(self) -> "Form":
        return self.chart.zero()

    def one_like(self) -> "Form":
        return self.chart.one()

    @property
    def degree(self) -> int:
        degrees = {len(k) for k in self.comps}
        if len(degrees) > 1:
            raise Inhomogeneous(f"form has components of degrees {sorted(degrees)}")
        return degrees.pop() if degrees else 0

    def is_homogeneous(self, degree: int | None = None) -> bool:
        degrees = {len(k) for k in self.comps}
        if degree is None:
            return len(degrees) <= 1
        return degrees <= {degree}

    def require_degree(self, degree: int, what: str = "form") -> None:
        if not self.is_homogeneous(degree):
            raise DegreeError(f"{what} must have degree {degree}")

    def parts(self) -> dict[int, "Form"]:
        out: dict[int, dict] = {}
        for k, v in self.comps.items():
            out.setdefault(len(k), {})[k] = v
        return {deg: Form._raw(self.chart, c) for deg, c in sorted(out.items())}

    def part(self, degree: int) -> "Form":
        return Form._raw(self.chart, {k: v for k, v in self.comps.items() if len(k) == degree})

    def coefficient(self, index: Sequence[int]):
        return self.comps.get(tuple(index), self.chart.ring.zero())

    def is_zero(self, tol=None) -> bool:
        return all(v.is_zero(tol) for v in self.comps.values())

    def max_abs(self) -> float:
        return max((v.max_abs() for v in self.comps.values()), default=0.0)

    def map_coefficients(self, fn: Callable) -> "Form":
        return Form(self.chart, {k: fn(v) for k, v in self.comps.items()})

    # arithmetic ------------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Form):
            if isinstance(other, Number) or _is_scalar(other, self.chart):
                other = self.chart.scalar(other)
            else:
                return NotImplemented
        self._check(other)
        comps = dict(self.comps)
        for k, v in other.comps.items():
            if k in comps:
                s = comps[k] + v
                if s.is_zero():
                    del comps[k]
                else:
                    comps[k] = s
            else:
                comps[k] = v
        return Form._raw(self.chart, comps)

    __radd__ = __add__

    def __neg__(self):
        return Form._raw(self.chart, {k: -v for k, v in self.comps.items()})

    def __sub__(self, other):
        if not isinstance(other, Form):
            if isinstance(other, Number) or _is_scalar(other, self.chart):
                other = self.chart.scalar(other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, factor) -> "Form":
        if isinstance(factor, Number) and factor == 0:
            return self.chart.zero()
        return Form(self.chart, {k: v * factor for k, v in self.comps.items()})

    def __mul__(self, other):
        if isinstance(other, Form):
            self._check(other)
            comps: dict = {}
            for i, a in self.comps.items():
                for j, b in other.comps.items():
                    merged = merge_indices(i, j)
                    if merged is None:
                        continue
                    sign, k = merged
                    term = a * b if sign > 0 else -(a * b)
                    comps[k] = comps[k] + term if k in comps else term
            return Form(self.chart, comps)
        if isinstance(other, Number) or _is_scalar(other, self.chart):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Number) or _is_scalar(other, self.chart):
            return self.scale(other)
        return NotImplemented

    # calculus --------------------------------------------------------------
    def d(self) -> "Form":
        comps: dict = {}
        for idx, c in self.comps.items():
            for i in range(self.chart.dim):
                if i in idx:
                    continue
                dc = c.partial(i)
                if dc.is_zero():
                    continue
                sign, k = merge_indices((i,), idx)
                term = dc if sign > 0 else -dc
                comps[k] = comps[k] + term if k in comps else term
        return Form(self.chart, comps)

    def contract(self, i: int) -> "Form":
        comps: dict = {}
        for idx, c in self.comps.items():
            if i not in idx:
                continue
            sign, k = remove_position(idx, idx.index(i))
            term = c if sign > 0 else -c
            comps[k] = comps[k] + term if k in comps else term
        return Form(self.chart, comps)

    def contract_vector(self, vector: Sequence) -> "Form":
        """Interior product with the vector field ``sum v^i d/dx^i``."""
        comps: dict = {}
        for idx, c in self.comps.items():
            for pos, i in enumerate(idx):
                v = vector[i]
                if v.is_zero():
                    continue
                sign, k = remove_position(idx, pos)
                term = c * v if sign > 0 else -(c * v)
                comps[k] = comps[k] + term if k in comps else term
        return Form(self.chart, comps)

    # comparison / display -------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, Number) or _is_scalar(other, self.chart):
            other = self.chart.scalar(other)
        if not isinstance(other, Form):
            return NotImplemented
        if other.chart is not self.chart:
            return False
        return (self - other).is_zero()

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        if not self.comps:
            return "0"
        names = self.chart.names
        terms = []
        for idx in sorted(self.comps, key=lambda k: (len(k), k)):
            basis = "^".join(f"d{names[i]}" for i in idx)
            coeff = str(self.comps[idx])
            terms.append(f"({coeff})" + (f"*{basis}" if basis else ""))
        return " + ".join(terms)


def _is_scalar(value, chart: Chart) -> bool:
    return isinstance(value, (RationalFn, Jet)) and value.ring is chart.ring


class TensorForm:
    """Element of ``Omega tensor_A Omega`` stored as ``sum c_IJ dx^I (x) dx^J``."""

    __slots__ = ("chart", "comps")

    def __init__(self, chart: Chart, comps: Mapping[tuple[Index, Index], object]):
        self.chart = chart
        self.comps = {k: v for k, v in comps.items() if not v.is_zero()}

    @classmethod
    def from_pairs(cls, chart: Chart, pairs: Iterable[tuple[Form, Form]]) -> "TensorForm":
        comps: dict = {}
        for left, right in pairs:
            for i, a in left.comps.items():
                for j, b in right.comps.items():
                    k = (i, j)
                    comps[k] = comps[k] + a * b if k in comps else a * b
        return cls(chart, comps)

    def pairs(self) -> list[tuple[Form, Form]]:
        return [
            (Form(self.chart, {i: c}), self.chart.basis(j)) for (i, j), c in sorted(self.comps.items())
        ]

    def __add__(self, other: "TensorForm") -> "TensorForm":
        if other.chart is not self.chart:
            raise ChartMismatch("tensors live on different charts")
        comps = dict(self.comps)
        for k, v in other.comps.items():
            comps[k] = comps[k] + v if k in comps else v
        return TensorForm(self.chart, comps)

    def __neg__(self) -> "TensorForm":
        return TensorForm(self.chart, {k: -v for k, v in self.comps.items()})

    def __sub__(self, other: "TensorForm") -> "TensorForm":
        return self + (-other)

    def scale(self, factor) -> "TensorForm":
        return TensorForm(self.chart, {k: v * factor for k, v in self.comps.items()})

    __rmul__ = scale

    def coefficient(self, left: Sequence[int], right: Sequence[int]):
        return self.comps.get((tuple(left), tuple(right)), self.chart.ring.zero())

    def is_zero(self, tol=None) -> bool:
        return all(v.is_zero(tol) for v in self.comps.values())

    def max_abs(self) -> float:
        return max((v.max_abs() for v in self.comps.values()), default=0.0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorForm):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        if not self.comps:
            return "0"
        names = self.chart.names
        out = []
        for (i, j), c in sorted(self.comps.items()):
            left = "^".join(f"d{names[a]}" for a in i) or "1"
            right = "^".join(f"d{names[a]}" for a in j) or "1"
            out.append(f"({c})*{left}(x){right}")
        return " + ".join(out)


# ---------------------------------------------------------------------------
# Functional interface
# ---------------------------------------------------------------------------


def wedge(left: Form, right: Form) -> Form:
    return left * right


def exterior_d(form):
    return form.d()


def contract(i: int, form: Form) -> Form:
    return form.contract(i)


def tensor(left: Form, right: Form) -> TensorForm:
    return TensorForm.from_pairs(left.chart, [(left, right)])


def homogeneous_parts(element) -> dict[int, object]:
    """Degree decomposition of any graded element exposing ``parts()``."""
    return element.parts()


def leibnizator(op: Callable, op_degree: int, left, right):
    """``op(left right) - op(left) right - (-1)^(op_degree |left|) left op(right)``.

    Works for any graded algebra element supporting ``parts()`` and ``*``.
    Inhomogeneous arguments are split into homogeneous pieces.
    """
    total = left.zero_like()
    for deg, piece in left.parts().items():
        for _, other in right.parts().items():
            sign = -1 if (op_degree * deg) % 2 else 1
            term = op(piece * other) - op(piece) * other
            term = term - piece * op(other) if sign > 0 else term + piece * op(other)
            total = total + term
    return total


def graded_commutator(left, right):
    """``[a, b} = ab - (-1)^(|a||b|) ba`` extended bilinearly over degrees."""
    total = left.zero_like()
    for da, a in left.parts().items():
        for db, b in right.parts().items():
            if (da * db) % 2:
                total = total + (a * b + b * a)
            else:
                total = total + (a * b - b * a)
    return total
