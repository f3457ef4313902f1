"""Residual bookkeeping shared by the verification routines and the CLI."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any, Iterable


@dataclass
class Check:
    """Outcome of one identity check over a batch of samples."""

    id: str
    passed: bool
    residual: float
    samples: int = 0
    detail: str = ""

    def as_dict(self) -> dict[str, Any]:
        out = asdict(self)
        out["residual"] = float(f"{self.residual:.6g}")
        return out


class Tally:
    """Accumulates residual elements for one identity.

    ``add`` accepts any value exposing ``is_zero(tol)`` and ``max_abs()``.
    A sample passes when ``is_zero`` holds, which is exact equality for
    exact coefficients and the per-coefficient jet tolerance otherwise.
    """

    def __init__(self, id: str, tol=None):
        self.id = id
        self.tol = tol
        self.count = 0
        self.failures = 0
        self.worst = 0.0
        self.first_failure: str = ""

    def add(self, value, context: str = "") -> bool:
        self.count += 1
        ok = value.is_zero(self.tol)
        size = value.max_abs()
        self.worst = max(self.worst, size)
        if not ok:
            self.failures += 1
            if not self.first_failure:
                self.first_failure = context
        return ok

    def add_flag(self, ok: bool, size: float = 0.0, context: str = "") -> bool:
        self.count += 1
        self.worst = max(self.worst, size)
        if not ok:
            self.failures += 1
            if not self.first_failure:
                self.first_failure = context
        return ok

    def check(self, detail: str = "") -> Check:
        passed = self.failures == 0 and self.count > 0
        text = detail
        if self.failures:
            text = f"{self.failures} failing samples; first: {self.first_failure}" + (f"; {detail}" if detail else "")
        return Check(self.id, passed, self.worst, self.count, text)


@dataclass
class Report:
    suite: str
    checks: list[Check] = field(default_factory=list)
    environment: dict[str, Any] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    tables: dict[str, list[list[str]]] = field(default_factory=dict)

    def extend(self, checks: Iterable[Check]) -> None:
        self.checks.extend(checks)

    def add(self, check: Check) -> None:
        self.checks.append(check)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def get(self, id: str) -> Check:
        for c in self.checks:
            if c.id == id:
                return c
        raise KeyError(id)

    def sorted_checks(self) -> list[Check]:
        return sorted(self.checks, key=lambda c: c.id)

    def to_json(self) -> str:
        doc = {
            "suite": self.suite,
            "passed": self.passed,
            "checks": [c.as_dict() for c in self.sorted_checks()],
            "environment": dict(sorted(self.environment.items())),
        }
        if self.notes:
            doc["notes"] = list(self.notes)
        if self.tables:
            doc["tables"] = {name: [list(r) for r in rows] for name, rows in self.tables.items()}
        return json.dumps(doc, indent=2, sort_keys=False)

    def to_text(self) -> str:
        checks = self.sorted_checks()
        width = max([len(c.id) for c in checks] + [8])
        lines = [f"suite: {self.suite}"]
        for key, value in sorted(self.environment.items()):
            lines.append(f"  {key}: {value}")
        lines.append(f"{'identity':<{width}}  {'status':<6}  {'residual':>12}  {'samples':>7}  detail")
        lines.append("-" * (width + 40))
        for c in checks:
            status = "pass" if c.passed else "FAIL"
            lines.append(f"{c.id:<{width}}  {status:<6}  {c.residual:>12.3e}  {c.samples:>7}  {c.detail}")
        for name, rows in self.tables.items():
            lines.append("")
            lines.append(f"table: {name}")
            widths = [max(len(str(r[i])) for r in rows) for i in range(len(rows[0]))] if rows else []
            for r in rows:
                lines.append("  " + "  ".join(f"{str(c):<{w}}" for c, w in zip(r, widths)).rstrip())
        for note in self.notes:
            lines.append(f"note: {note}")
        lines.append(f"overall: {'pass' if self.passed else 'FAIL'}")
        return "\n".join(lines)
