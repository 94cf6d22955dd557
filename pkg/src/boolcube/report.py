"""The record every inequality check returns, plus its JSON/CSV forms."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional

DEFAULT_TOL = 1e-9

REPORT_FIELDS = ("name", "lhs", "rhs", "ratio", "pass", "tol", "witness", "params")


def _ratio(lhs: float, rhs: float) -> float:
    if rhs == 0.0:
        return 0.0 if lhs == 0.0 else math.inf
    return lhs / rhs


@dataclass(frozen=True)
class InequalityReport:
    """One instance of ``lhs <= rhs`` evaluated at concrete parameters.

    ``passed`` is ``None`` when the instance carries a ratio for aggregation
    only (no inequality is asserted, e.g. an empirical BH quotient).
    """

    name: str
    lhs: float
    rhs: float
    ratio: float
    passed: Optional[bool]
    tol: float = DEFAULT_TOL
    witness: Optional[str] = None
    params: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def build(
        cls,
        name: str,
        lhs: float,
        rhs: float,
        *,
        tol: float = DEFAULT_TOL,
        witness: Optional[str] = None,
        params: Optional[dict[str, Any]] = None,
        asserted: bool = True,
    ) -> "InequalityReport":
        lhs = float(lhs)
        rhs = float(rhs)
        passed = bool(lhs <= rhs * (1.0 + tol)) if asserted else None
        return cls(name, lhs, rhs, _ratio(lhs, rhs), passed, tol, witness, dict(params or {}))

    @property
    def failed(self) -> bool:
        return self.passed is False

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "ratio": self.ratio,
            "pass": self.passed,
            "tol": self.tol,
            "witness": self.witness,
            "params": dict(self.params),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "InequalityReport":
        return cls(
            name=data["name"],
            lhs=float(data["lhs"]),
            rhs=float(data["rhs"]),
            ratio=float(data["ratio"]),
            passed=data["pass"],
            tol=float(data["tol"]),
            witness=data.get("witness"),
            params=dict(data.get("params") or {}),
        )

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def _fmt(value: Any) -> str:
    if isinstance(value, bool) or value is None:
        return "" if value is None else str(value).lower()
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def reports_to_csv(reports: Iterable[InequalityReport]) -> str:
    """Flatten reports into CSV; params become ``param_<key>`` columns."""
    reports = list(reports)
    keys = sorted({k for r in reports for k in r.params})
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(list(REPORT_FIELDS[:-1]) + [f"param_{k}" for k in keys])
    for r in reports:
        row = r.to_dict()
        writer.writerow(
            [_fmt(row[f]) for f in REPORT_FIELDS[:-1]] + [_fmt(r.params.get(k)) for k in keys]
        )
    return out.getvalue()
