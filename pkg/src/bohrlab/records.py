"""Pass/fail records for inequality checks and the report that aggregates them."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable


def _clean(value: Any) -> Any:
    """Make metadata JSON-safe and deterministic."""
    if isinstance(value, complex):
        return [_clean(value.real), _clean(value.imag)]
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in sorted(value.items())}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if hasattr(value, "item"):  # numpy scalars
        return _clean(value.item())
    return value


@dataclass(frozen=True)
class VerificationRecord:
    name: str
    lhs: float
    rhs: float
    passed: bool
    margin: float
    metadata: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "lhs": _clean(float(self.lhs)),
            "rhs": _clean(float(self.rhs)),
            "margin": _clean(float(self.margin)),
            "passed": bool(self.passed),
            "metadata": _clean(dict(self.metadata)),
        }


def check(name: str, lhs: float, rhs: float, tol: float = 0.0, strict: bool = False,
          **metadata) -> VerificationRecord:
    """Record ``lhs <= rhs + tol`` (``<`` when ``strict``)."""
    lhs, rhs = float(lhs), float(rhs)
    if strict:
        ok = lhs < rhs + tol
    else:
        ok = lhs <= rhs + tol
    if math.isnan(lhs) or math.isnan(rhs):
        ok = False
    return VerificationRecord(name, lhs, rhs, bool(ok), rhs - lhs, metadata)


@dataclass
class VerificationReport:
    config: dict
    records: list[VerificationRecord]

    @property
    def passed(self) -> int:
        return sum(r.passed for r in self.records)

    @property
    def failed(self) -> int:
        return len(self.records) - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def sorted_records(self) -> list[VerificationRecord]:
        return sorted(self.records, key=lambda r: r.name)

    def to_json(self) -> dict:
        return {
            "config": _clean(self.config),
            "records": [r.to_json() for r in self.sorted_records()],
            "summary": {"passed": self.passed, "failed": self.failed},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    def to_csv_rows(self) -> Iterable[list]:
        yield ["name", "lhs", "rhs", "margin", "passed"]
        for r in self.sorted_records():
            yield [r.name, repr(float(r.lhs)), repr(float(r.rhs)), repr(float(r.margin)), str(r.passed).lower()]
