"""Geometry definitions: a chart, a metric given by expressions, optional conformal data.

A definition file is line oriented::

    name = sphere2
    coordinates = th, ph
    backend = jet
    base_point = 1, 1
    order = 4
    metric:
        1, 0
        0, sin(th)^2
    conformal_tau = x, y
    conformal_alpha = 2
    conformal_beta = 1

``#`` starts a comment.  The metric block has one row per line.  Expressions
use ``+ - * / ^`` with integer powers, parentheses, decimal or integer
literals, the coordinate names and, for jets, ``sin cos exp sqrt``.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import coefficients
from .coefficients import JetRing, RationalRing
from .errors import CalculusError, InvalidMetric, ParseError
from .forms import Chart, Form
from .riemann import Codifferential, ConformalData, Metric, divergence_delta

__all__ = ["GeometryDef", "Geometry", "parse_geometry", "parse_expression", "builtin", "BUILTINS", "load_geometry"]

FUNCTIONS = ("sin", "cos", "exp", "sqrt")


@dataclass
class GeometryDef:
    name: str
    coordinates: tuple[str, ...]
    metric: list[list[str]]
    backend: str = "rational"
    base_point: tuple[Fraction, ...] = ()
    order: int = 4
    conformal_tau: tuple[str, ...] | None = None
    conformal_alpha: str | None = None
    conformal_beta: Fraction | None = None

    @property
    def dim(self) -> int:
        return len(self.coordinates)

    def build(self, order: int | None = None, eps=None) -> "Geometry":
        return Geometry(self, order, eps)


@dataclass
class Geometry:
    """A parsed definition turned into a chart, metric and divergence codifferential."""

    definition: GeometryDef
    order: int | None = None
    eps: object = None
    chart: Chart = field(init=False)
    metric: Metric = field(init=False)
    delta: Codifferential = field(init=False)

    def __post_init__(self):
        gd = self.definition
        if gd.backend == "jet":
            self.order = gd.order if self.order is None else self.order
            extra = {} if self.eps is None else {"eps": self.eps}
            ring = JetRing(gd.coordinates, gd.base_point, self.order, **extra)
        else:
            ring = RationalRing(gd.coordinates)
        self.chart = Chart(ring)
        n = gd.dim
        entries = [[self.expression(text, where=f"metric[{i}][{j}]") for j, text in enumerate(row)] for i, row in enumerate(gd.metric)]
        if len(entries) != n or any(len(r) != n for r in entries):
            raise InvalidMetric(f"metric must be {n}x{n}")
        self.metric = Metric.from_matrix(self.chart, entries, label=gd.name)
        self.delta = divergence_delta(self.metric)

    @property
    def name(self) -> str:
        return self.definition.name

    @property
    def exact(self) -> bool:
        return self.definition.backend != "jet"

    @property
    def dim(self) -> int:
        return self.chart.dim

    def expression(self, text: str, where: str = "expression"):
        return parse_expression(text, self.chart, where)

    def conformal(self) -> ConformalData | None:
        gd = self.definition
        if gd.conformal_tau is None:
            return None
        if len(gd.conformal_tau) != gd.dim:
            raise ParseError(f"conformal_tau needs {gd.dim} components")
        comps = {(i,): self.expression(t, "conformal_tau") for i, t in enumerate(gd.conformal_tau)}
        tau = Form(self.chart, comps)
        alpha = self.chart.scalar(self.expression(gd.conformal_alpha or "0", "conformal_alpha"))
        beta = gd.conformal_beta if gd.conformal_beta is not None else Fraction(gd.dim, 2)
        return ConformalData(tau, alpha, beta)


# ---------------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------------


def _number(text: str) -> Fraction:
    return Fraction(text)


def parse_expression(text: str, chart: Chart, where: str = "expression"):
    """Evaluate an arithmetic expression to an element of the chart's ring."""
    ring = chart.ring
    names = {name: chart.coordinate(i) for i, name in enumerate(chart.names)}
    # ``^`` binds like ``**``; rewrite before handing the text to the parser
    source = text.strip().replace("^", "**")
    try:
        tree = ast.parse(source, mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"{where}: cannot parse {text!r} at column {exc.offset}") from None

    def fail(node, message):
        col = getattr(node, "col_offset", -1) + 1
        raise ParseError(f"{where}: {message} at column {col} in {text!r}")

    def power(base, node):
        exp = ev_int(node)
        out = ring.one()
        for _ in range(abs(exp)):
            out = out * base
        if exp < 0:
            if out.is_zero():
                fail(node, "division by zero")
            return out.inverse()
        return out

    def ev_int(node) -> int:
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -ev_int(node.operand)
        fail(node, "exponent must be an integer literal")

    def ev(node):
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
                fail(node, "unsupported literal")
            literal = ast.get_source_segment(source, node) or str(node.value)
            return ring.const(_number(literal))
        if isinstance(node, ast.Name):
            if node.id not in names:
                fail(node, f"unknown name {node.id!r}")
            return names[node.id]
        if isinstance(node, ast.UnaryOp):
            if isinstance(node.op, ast.USub):
                return -ev(node.operand)
            if isinstance(node.op, ast.UAdd):
                return ev(node.operand)
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                return power(ev(node.left), node.right)
            left, right = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                if right.is_zero():
                    fail(node, "division by zero")
                return left * right.inverse()
        if isinstance(node, ast.Call):
            if not isinstance(node.func, ast.Name) or node.func.id not in FUNCTIONS:
                fail(node, "unknown function")
            if len(node.args) != 1 or node.keywords:
                fail(node, "functions take one argument")
            try:
                return getattr(coefficients, node.func.id)(ev(node.args[0]))
            except CalculusError as exc:
                fail(node, str(exc))
        fail(node, "unsupported syntax")

    return ev(tree.body)


# ---------------------------------------------------------------------------
# Definition files
# ---------------------------------------------------------------------------


def _split_top(text: str) -> list[str]:
    """Split on commas outside parentheses."""
    out, depth, current = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(current).strip())
            current = []
        else:
            current.append(ch)
    out.append("".join(current).strip())
    return [p for p in out if p]


KEYS = {"name", "coordinates", "backend", "base_point", "order", "conformal_tau", "conformal_alpha", "conformal_beta"}


def parse_geometry(text: str) -> GeometryDef:
    values: dict[str, tuple[int, str]] = {}
    rows: list[tuple[int, str]] = []
    in_metric = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if in_metric and raw[:1] in (" ", "\t"):
            rows.append((lineno, line.strip()))
            continue
        in_metric = False
        stripped = line.strip()
        if stripped.rstrip(":").strip() == "metric" and stripped.endswith(":"):
            in_metric = True
            continue
        if "=" not in stripped:
            raise ParseError(f"line {lineno}, column 1: expected 'key = value' or 'metric:'")
        key, value = (s.strip() for s in stripped.split("=", 1))
        if key not in KEYS:
            raise ParseError(f"line {lineno}, column 1: unknown key {key!r}")
        values[key] = (lineno, value)

    def need(key):
        if key not in values:
            raise ParseError(f"missing key {key!r}")
        return values[key][1]

    name = need("name")
    coords = tuple(_split_top(need("coordinates")))
    if not coords or len(set(coords)) != len(coords) or not all(c.isidentifier() for c in coords):
        raise ParseError(f"line {values['coordinates'][0]}: coordinate names must be distinct identifiers")
    backend = values.get("backend", (0, "rational"))[1]
    if backend not in ("rational", "jet"):
        raise ParseError(f"line {values['backend'][0]}: backend must be 'rational' or 'jet'")
    if not rows:
        raise ParseError("missing metric block")
    metric = [_split_top(r) for _, r in rows]
    for (lineno, _), row in zip(rows, metric):
        if len(row) != len(coords):
            raise ParseError(f"line {lineno}: metric row needs {len(coords)} entries")
    gd = GeometryDef(name, coords, metric, backend)

    def fraction(key, text):
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"line {values[key][0]}: {key} must be a rational number") from None

    if backend == "jet":
        base = _split_top(values.get("base_point", (0, ",".join("0" * len(coords))))[1])
        if len(base) != len(coords):
            raise ParseError("base_point must have one entry per coordinate")
        gd.base_point = tuple(fraction("base_point", b) for b in base)
        if "order" in values:
            try:
                gd.order = int(values["order"][1])
            except ValueError:
                raise ParseError(f"line {values['order'][0]}: order must be an integer") from None
    if "conformal_tau" in values:
        gd.conformal_tau = tuple(_split_top(values["conformal_tau"][1]))
        gd.conformal_alpha = values.get("conformal_alpha", (0, "0"))[1]
        if "conformal_beta" in values:
            gd.conformal_beta = fraction("conformal_beta", values["conformal_beta"][1])
    # parse every expression once so errors surface at load time
    gd.build()
    return gd


# ---------------------------------------------------------------------------
# Built-in geometries
# ---------------------------------------------------------------------------


def _flat(n: int, names: Sequence[str]) -> GeometryDef:
    metric = [["1" if i == j else "0" for j in range(n)] for i in range(n)]
    euler = tuple(names)
    return GeometryDef(f"flat{n}", tuple(names), metric, conformal_tau=euler, conformal_alpha="2", conformal_beta=Fraction(n, 2))


def _sphere(radius: Fraction | None = None) -> GeometryDef:
    if radius is None:
        metric = [["1", "0"], ["0", "sin(th)^2"]]
        name = "sphere2"
    else:
        r2 = f"({radius})^2"
        metric = [[r2, "0"], ["0", f"{r2}*sin(th)^2"]]
        name = f"sphere2r:{radius}"
    return GeometryDef(name, ("th", "ph"), metric, "jet", (Fraction(1), Fraction(1)), 4)


def _special_conformal() -> GeometryDef:
    """Flat 3-space with the special conformal field along x, whose alpha is not constant."""
    gd = _flat(3, ("x", "y", "z"))
    gd.name = "flat3sc"
    gd.conformal_tau = ("x^2 - y^2 - z^2", "2*x*y", "2*x*z")
    gd.conformal_alpha = "4*x"
    return gd


BUILTINS = ("flat2", "flat3", "flat3sc", "sphere2", "sphere2r", "diagpoly")


def builtin(name: str) -> GeometryDef:
    if name == "flat2":
        return _flat(2, ("x", "y"))
    if name == "flat3":
        return _flat(3, ("x", "y", "z"))
    if name == "flat3sc":
        return _special_conformal()
    if name == "sphere2":
        return _sphere()
    if name == "sphere2r" or name.startswith("sphere2r:"):
        text = name.partition(":")[2] or "2"
        try:
            radius = Fraction(text)
        except ValueError:
            raise ParseError(f"bad radius {text!r}") from None
        if radius <= 0:
            raise ParseError("radius must be positive")
        return _sphere(radius)
    if name == "diagpoly":
        return GeometryDef("diagpoly", ("x", "y"), [["1 + x^2", "0"], ["0", "1 + y^2"]])
    raise KeyError(name)


def load_geometry(source: str) -> GeometryDef:
    """A built-in name or the path of a definition file."""
    try:
        return builtin(source)
    except KeyError:
        pass
    try:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"unknown geometry {source!r}: {exc.strerror}") from None
    return parse_geometry(text)
