from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional


@dataclass
class Report:
    """Pass/fail tallies per named check, keeping the first failing witness."""

    name: str
    counts: dict[str, list[int]] = field(default_factory=dict)
    first_failure: Optional[dict] = None
    notes: dict[str, Any] = field(default_factory=dict)

    def record(self, check: str, ok: bool, witness: Optional[dict] = None) -> bool:
        tally = self.counts.setdefault(check, [0, 0])
        tally[0 if ok else 1] += 1
        if not ok and self.first_failure is None:
            self.first_failure = {"check": check, **(witness or {})}
        return ok

    def note(self, key: str, amount: int = 1):
        self.notes[key] = self.notes.get(key, 0) + amount

    @property
    def passed(self) -> int:
        return sum(p for p, _ in self.counts.values())

    @property
    def failed(self) -> int:
        return sum(f for _, f in self.counts.values())

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def merge(self, other: Report) -> Report:
        for check, (p, f) in other.counts.items():
            tally = self.counts.setdefault(check, [0, 0])
            tally[0] += p
            tally[1] += f
        if self.first_failure is None:
            self.first_failure = other.first_failure
        for key, value in other.notes.items():
            self.notes[key] = self.notes.get(key, 0) + value
        return self

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "ok": self.ok,
            "passed": self.passed,
            "failed": self.failed,
            "checks": {k: {"passed": p, "failed": f} for k, (p, f) in sorted(self.counts.items())},
            "first_failure": self.first_failure,
            "notes": dict(sorted(self.notes.items())),
        }
