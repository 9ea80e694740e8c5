"""Check reports shared by the validators and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class Report:
    title: str
    checks: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def add(self, name: str, ok: bool, detail: str = "") -> bool:
        self.checks.append(Check(name, bool(ok), detail))
        return bool(ok)

    def extend(self, other: "Report", prefix: str = ""):
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.ok, c.detail))

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def __bool__(self):
        return self.ok

    @property
    def failures(self):
        return [c for c in self.checks if not c.ok]

    @property
    def first_failure(self):
        f = self.failures
        return f[0] if f else None

    def summary(self) -> str:
        lines = ["%s: %s" % (self.title, "PASS" if self.ok else "FAIL")]
        for c in self.checks:
            if not c.ok or c.detail:
                lines.append("  [%s] %s%s" % ("ok" if c.ok else "FAIL", c.name,
                                             (": " + c.detail) if c.detail else ""))
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "ok": self.ok,
            "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in self.checks],
            "data": self.data,
        }


class ValidationError(ValueError):
    """Raised when a structure fails its axioms; carries the failing report."""

    def __init__(self, report: Report):
        self.report = report
        f = report.first_failure
        super().__init__("%s: %s%s" % (report.title, f.name if f else "?",
                                       (" (" + f.detail + ")") if f and f.detail else ""))
