"""Small named-check reports shared by the verification entry points."""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["Check", "Report"]


@dataclass(frozen=True)
class Check:
    """One named verification with its worst residual."""

    name: str
    passed: bool
    residual: float = 0.0
    detail: str = ""

    def to_json(self):
        out = {
            "name": self.name,
            "passed": bool(self.passed),
            "residual": float(self.residual),
        }
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class Report:
    """An ordered collection of checks with an overall verdict."""

    checks: list[Check] = field(default_factory=list)

    def add(self, name, passed, residual=0.0, detail=""):
        self.checks.append(Check(name, bool(passed), float(residual), detail))

    def extend(self, other: "Report", prefix: str = ""):
        for c in other.checks:
            self.checks.append(
                Check(prefix + c.name, c.passed, c.residual, c.detail)
            )

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def worst_residual(self) -> float:
        return max((c.residual for c in self.checks), default=0.0)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json(self):
        return {
            "passed": self.passed,
            "worst_residual": self.worst_residual,
            "checks": [c.to_json() for c in self.checks],
        }

    def summary(self) -> str:
        lines = []
        for c in self.checks:
            status = "ok  " if c.passed else "FAIL"
            line = f"[{status}] {c.name}  residual={c.residual:.3e}"
            if c.detail:
                line += f"  ({c.detail})"
            lines.append(line)
        verdict = "PASS" if self.passed else "FAIL"
        lines.append(f"overall: {verdict}")
        return "\n".join(lines)
