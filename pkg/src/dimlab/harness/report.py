"""Verdict records and the canonical report file."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Any

from ..core import dumps

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"
FLOAT_SLACK = 1e-9


def fingerprint(theorem_id: str, payload: Any) -> str:
    """sha256 of the canonical JSON of everything the check consumed."""
    return hashlib.sha256(dumps({"theorem_id": theorem_id, "input": payload}).encode()).hexdigest()


@dataclass
class VerdictReport:
    theorem_id: str
    instance: str
    instance_fingerprint: str
    params: dict
    lhs: Any
    relation: str
    rhs: Any
    verdict: str
    reason: str | None = None
    slack: float | None = None
    extra: dict = field(default_factory=dict)
    runtime_ms: float | None = None

    def to_json(self, timings: bool = False) -> dict:
        out = {
            "theorem_id": self.theorem_id,
            "instance": self.instance,
            "instance_fingerprint": self.instance_fingerprint,
            "params": self.params,
            "lhs": self.lhs,
            "relation": self.relation,
            "rhs": self.rhs,
            "verdict": self.verdict,
        }
        if self.reason is not None:
            out["reason"] = self.reason
        if self.slack is not None:
            out["slack"] = self.slack
        if self.extra:
            out["extra"] = self.extra
        if timings and self.runtime_ms is not None:
            out["runtime_ms"] = round(self.runtime_ms, 3)
        return out


def sort_reports(reports: list[VerdictReport]) -> list[VerdictReport]:
    return sorted(reports, key=lambda r: (r.theorem_id, r.instance_fingerprint, r.instance))


def render(reports: list[VerdictReport], timings: bool = False) -> str:
    """Report file body: a JSON list sorted by theorem id and fingerprint."""
    return dumps([r.to_json(timings) for r in sort_reports(reports)]) + "\n"


def summary(reports: list[VerdictReport]) -> dict[str, int]:
    out = {PASS: 0, FAIL: 0, SKIPPED: 0}
    for r in reports:
        out[r.verdict] += 1
    return out
