"""Verification reports: a small, stable, machine-readable result format.

Reports are plain data.  Rendering is deterministic: given the same checks
in the same order, both the text and the JSON form are byte-identical,
which the command-line contract relies on.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

SCHEMA_VERSION = "v1"


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst_residual: float = 0.0
    witness: Optional[dict] = None
    detail: str = ""

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "status": "pass" if self.passed else "fail",
            "worst_residual": self.worst_residual,
        }
        if self.detail:
            out["detail"] = self.detail
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class VerificationReport:
    title: str
    checks: list[CheckResult] = field(default_factory=list)
    context: dict = field(default_factory=dict)

    def add(self, check: CheckResult) -> None:
        self.checks.append(check)

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "title": self.title,
            "context": self.context,
            "overall": "pass" if self.overall else "fail",
            "checks": [c.to_dict() for c in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def render_text(self) -> str:
        lines = [self.title]
        for key in sorted(self.context):
            value = self.context[key]
            if isinstance(value, list):
                lines.append(f"  {key}:")
                lines.extend(f"    {item}" for item in value)
            else:
                lines.append(f"  {key} = {value}")
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            line = f"[{status}] {c.name} (worst residual {c.worst_residual:.3e})"
            if c.detail:
                line += f" - {c.detail}"
            lines.append(line)
            if c.witness is not None and not c.passed:
                lines.append(
                    "       witness: "
                    + json.dumps(c.witness, sort_keys=True, default=str)
                )
        lines.append("overall: " + ("pass" if self.overall else "FAIL"))
        return "\n".join(lines) + "\n"
