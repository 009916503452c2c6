"""Machine-checkable verification records."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

from .numeric import get_mode, serialize


@dataclass
class Violation:
    i: int
    j: Optional[int] = None
    k: Optional[int] = None
    residual: Any = None
    note: str = ""

    def sort_key(self):
        return (self.i, -1 if self.j is None else self.j, -1 if self.k is None else self.k)

    def to_dict(self):
        out = {"i": self.i}
        if self.j is not None:
            out["j"] = self.j
        if self.k is not None:
            out["k"] = self.k
        out["residual"] = serialize(self.residual)
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class VerificationReport:
    """Pass/fail record for one predicate, inequality family or pipeline.

    Pipelines nest the reports of their stages in ``stages``; ``details``
    holds free-form values (counts, witnesses, bounds) that must be
    JSON-serializable after :func:`serialize`.
    """

    predicate: str
    passed: bool
    violations: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    stages: list = field(default_factory=list)
    mode: str = field(default_factory=lambda: get_mode().kind)
    tolerance: float = field(default_factory=lambda: get_mode().eps)

    def __bool__(self):
        return self.passed

    def __post_init__(self):
        self.passed = bool(self.passed)

    def add_stage(self, report: "VerificationReport") -> "VerificationReport":
        self.stages.append(report)
        if not report.passed:
            self.passed = False
        return report

    def failed_stage(self):
        for stage in self.stages:
            if not stage.passed:
                return stage.predicate
        return None

    def to_dict(self):
        out = {
            "predicate": self.predicate,
            "pass": bool(self.passed),
            "violations": [v.to_dict() for v in sorted(self.violations, key=Violation.sort_key)],
            "mode": self.mode,
            "tolerance": self.tolerance,
        }
        if self.details:
            out["details"] = _jsonable(self.details)
        if self.stages:
            out["stages"] = [s.to_dict() for s in self.stages]
        return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, VerificationReport):
        return obj.to_dict()
    return serialize(obj)
