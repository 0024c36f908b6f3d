"""Small pass/fail record used by the verification routines and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckResult:
    name: str
    passed: bool
    value: float | None = None
    expected: float | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.passed

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        parts = [f"{tag} {self.name}"]
        if self.value is not None:
            parts.append(f"value={self.value:.12g}")
        if self.expected is not None:
            parts.append(f"expected={self.expected:.12g}")
        if self.detail:
            parts.append(self.detail)
        return "  ".join(parts)


@dataclass
class CheckReport:
    """Ordered collection of checks; truthy iff every check passed."""

    checks: list[CheckResult] = field(default_factory=list)

    def add(self, check: CheckResult) -> CheckResult:
        self.checks.append(check)
        return check

    def extend(self, other: "CheckReport") -> None:
        self.checks.extend(other.checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def __bool__(self) -> bool:
        return self.passed

    def lines(self) -> list[str]:
        return [c.line() for c in self.checks]
