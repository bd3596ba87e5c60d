"""Report records shared by the verification suites.

A BoundReport captures one inequality or identity instance. Bounds that
are unconditional theorems get assertable verdicts (pass/fail); bounds
carrying unspecified constants or o(1) terms are emitted report-only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

SCHEMA_VERSION = 1

PASS = "pass"
FAIL = "fail"
REPORT_ONLY = "report-only"
INCONCLUSIVE = "inconclusive"
VACUOUS_PASS = "vacuous-pass"

VERDICTS = (PASS, FAIL, REPORT_ONLY, INCONCLUSIVE, VACUOUS_PASS)


@dataclass
class BoundReport:
    """One verified instance: identifier, parameters, both sides, verdict."""

    bound_id: str
    params: dict
    lhs: float
    rhs: float
    ratio: float | None
    verdict: str
    notes: str = ""

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")

    @property
    def is_failure(self) -> bool:
        return self.verdict == FAIL

    def to_row(self, seed: int | None = None) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "bound_id": self.bound_id,
            "params": self.params,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "ratio": self.ratio,
            "verdict": self.verdict,
            "notes": self.notes,
            "seed": seed,
        }

    def to_json(self, seed: int | None = None) -> str:
        return json.dumps(self.to_row(seed), sort_keys=True, allow_nan=True)


def make_report(bound_id: str, params: dict, lhs: float, rhs: float,
                assertable: bool, notes: str = "",
                tolerance: float = 0.0) -> BoundReport:
    """Build a report; assertable bounds pass iff lhs <= rhs + tolerance."""
    ratio = (lhs / rhs) if rhs > 0 else None
    if assertable:
        verdict = PASS if lhs <= rhs + tolerance else FAIL
    else:
        verdict = REPORT_ONLY
    return BoundReport(bound_id=bound_id, params=params, lhs=float(lhs),
                       rhs=float(rhs), ratio=ratio, verdict=verdict, notes=notes)
