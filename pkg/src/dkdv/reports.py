"""Verification report containers and their JSON rendering."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import List, Optional

__all__ = ["Check", "Report", "merge_reports"]


@dataclass(frozen=True)
class Check:
    identity: str
    order: Optional[int]
    status: str  # "pass" | "fail"
    first_discrepancy: Optional[str] = None

    def to_payload(self) -> dict:
        out = {"identity": self.identity, "order": self.order, "status": self.status}
        if self.first_discrepancy is not None:
            out["first_discrepancy"] = self.first_discrepancy
        return out


@dataclass
class Report:
    name: str
    checks: List[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.status == "pass" for c in self.checks)

    def add(self, check: Check) -> None:
        self.checks.append(check)

    def extend(self, other: "Report") -> None:
        self.checks.extend(other.checks)

    def to_payload(self) -> list:
        return [c.to_payload() for c in self.checks]

    def to_json(self) -> str:
        return json.dumps(self.to_payload(), sort_keys=True, indent=2) + "\n"

    def summary(self) -> str:
        n_pass = sum(1 for c in self.checks if c.status == "pass")
        return f"{self.name}: {n_pass}/{len(self.checks)} checks passed"


def merge_reports(name: str, reports) -> Report:
    merged = Report(name)
    for r in reports:
        merged.checks.extend(r.checks)
    return merged
