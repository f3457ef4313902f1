"""Codifferential calculi, their Riemannian data and their noncommutative extensions."""

from .errors import CalculusError, InvalidMetric, ParseError
from .geometry import BUILTINS, Geometry, GeometryDef, builtin, load_geometry, parse_geometry
from .report import Check, Report
from .suites import SUITES, run_suite

__all__ = [
    "BUILTINS",
    "CalculusError",
    "Check",
    "Geometry",
    "GeometryDef",
    "InvalidMetric",
    "ParseError",
    "Report",
    "SUITES",
    "builtin",
    "load_geometry",
    "parse_geometry",
    "run_suite",
]
