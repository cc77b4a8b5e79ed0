"""Verdict containers returned by every axiom and goodness check."""
from __future__ import annotations

from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
WINDOW_TOO_SMALL = "window-too-small"
UNSUPPORTED = "unsupported"

MAX_WITNESSES = 16


@dataclass(frozen=True)
class CheckReport:
    name: str
    verdict: str
    witnesses: tuple = ()
    failures: int = 0
    notes: tuple = ()

    @property
    def passed(self):
        return self.verdict == PASS

    def __bool__(self):
        return self.passed

    def to_dict(self):
        return {
            "name": self.name,
            "verdict": self.verdict,
            "failures": self.failures,
            "witnesses": [
                {"index": [str(i) for i in idx], "residual": str(res)}
                for idx, res in self.witnesses
            ],
            "notes": list(self.notes),
        }


@dataclass
class ReportBuilder:
    """Accumulates residuals, keeping at most ``MAX_WITNESSES`` of them."""

    name: str
    witnesses: list = field(default_factory=list)
    failures: int = 0
    notes: list = field(default_factory=list)
    too_small: bool = False

    def add(self, index, residual):
        self.failures += 1
        if len(self.witnesses) < MAX_WITNESSES:
            self.witnesses.append((tuple(index), residual))

    def check_zero(self, index, residual):
        if residual:
            self.add(index, residual)

    def note(self, text):
        self.notes.append(text)

    def build(self):
        if self.failures:
            verdict = FAIL
        elif self.too_small:
            verdict = WINDOW_TOO_SMALL
        else:
            verdict = PASS
        return CheckReport(self.name, verdict, tuple(self.witnesses),
                           self.failures, tuple(self.notes))
