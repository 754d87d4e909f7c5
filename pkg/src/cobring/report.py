"""Result records shared by the map checks and the certificate runner."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class Status(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"

    def __str__(self):
        return self.value


@dataclass
class CheckReport:
    id: str
    anchor: str
    status: Status
    N: int
    elapsed_ms: float = 0.0
    witness: str | None = None
    details: list = field(default_factory=list, repr=False)

    @property
    def passed(self) -> bool:
        return self.status is Status.PASS


def combine(reports) -> tuple[Status, str | None]:
    """Fail beats inconclusive beats pass; the first offending witness wins."""
    status, witness = Status.PASS, None
    for r in reports:
        if r.status is Status.FAIL:
            return Status.FAIL, r.witness
        if r.status is Status.INCONCLUSIVE and status is Status.PASS:
            status, witness = Status.INCONCLUSIVE, r.witness
    return status, witness
