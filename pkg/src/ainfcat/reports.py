"""Machine-readable verdicts shared by the checking modules."""

from __future__ import annotations

from dataclasses import dataclass, field

STATUSES = ("pass", "fail", "approximate-pass", "out-of-scope")


@dataclass
class CheckReport:
    id: str
    status: str
    witnesses: list[str] = field(default_factory=list)
    config: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == "fail" and not self.witnesses:
            raise ValueError(f"failing report {self.id} carries no witness")

    @property
    def ok(self) -> bool:
        return self.status != "fail"

    def to_dict(self) -> dict:
        return {"id": self.id, "status": self.status,
                "witnesses": list(self.witnesses), "config": dict(self.config)}

    def line(self) -> str:
        head = f"[{self.status}] {self.id}"
        if self.witnesses:
            head += ": " + self.witnesses[0]
        return head


def verdict(id: str, violations: list[str], config: dict | None = None,
            evidence: list[str] | None = None, approximate: bool = False) -> CheckReport:
    """Build a report: failing iff ``violations`` is non-empty."""
    if violations:
        return CheckReport(id, "fail", violations, config or {})
    return CheckReport(id, "approximate-pass" if approximate else "pass",
                       evidence or [], config or {})
