"""Audit reports shared by every checker."""
from dataclasses import dataclass, field


@dataclass
class AuditReport:
    check: str
    checked: int = 0
    violations: list = field(default_factory=list)
    extremal: dict = field(default_factory=dict)

    @property
    def passed(self):
        return not self.violations

    def to_json(self):
        return {
            "check": self.check,
            "checked": self.checked,
            "violations": list(self.violations),
            "extremal": dict(self.extremal),
            "passed": self.passed,
        }
