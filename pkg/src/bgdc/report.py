"""Structured pass/fail reports shared by validators and verification suites."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List


@dataclass
class Report:
    name: str
    failures: List[str] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)
    checks: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, ok: bool, message: str) -> bool:
        self.checks += 1
        if not ok:
            self.failures.append(message)
        return ok

    def fail(self, message: str) -> None:
        self.checks += 1
        self.failures.append(message)

    def absorb(self, other: "Report", prefix: str = "") -> None:
        self.checks += other.checks
        self.failures.extend(prefix + f for f in other.failures)

    def to_json(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "checks": self.checks,
            "failures": list(self.failures),
            "details": self.details,
        }

    def __bool__(self):
        return self.passed
