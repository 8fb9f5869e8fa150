"""Verification check results and suite reports."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

from .poly import RatFun, equals_zero, reduce_mod_relation

PASS = "pass"
PASS_MOD_RELATION = "pass-mod-relation"
FAIL = "fail"
SKIPPED = "skipped"

SYMBOLIC = "symbolic"
SAMPLED = "sampled"
NUMERIC = "numeric"


@dataclass
class CheckResult:
    check_id: str
    method: str
    status: str
    detail: str = ""
    elapsed_ms: float = 0.0

    def to_dict(self) -> dict:
        return {
            "check-id": self.check_id,
            "method": self.method,
            "status": self.status,
            "detail": self.detail,
            "elapsed-ms": round(self.elapsed_ms, 3),
        }


@dataclass
class Report:
    suite: str
    checks: list[CheckResult] = field(default_factory=list)

    def add(self, check: CheckResult) -> CheckResult:
        self.checks.append(check)
        return check

    def extend(self, other: "Report") -> None:
        self.checks.extend(other.checks)

    @property
    def ok(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    def sorted_checks(self) -> list[CheckResult]:
        return sorted(self.checks, key=lambda c: c.check_id)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "status": PASS if self.ok else FAIL,
            "checks": [c.to_dict() for c in self.sorted_checks()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def summary_lines(self) -> list[str]:
        lines = []
        for c in self.sorted_checks():
            line = f"{c.status.upper():18s} {c.check_id} [{c.method}] ({c.elapsed_ms:.0f} ms)"
            if c.detail:
                line += f" -- {c.detail}"
            lines.append(line)
        lines.append(f"suite {self.suite}: {'OK' if self.ok else 'FAILED'}")
        return lines


def zero_status(f: RatFun) -> str | None:
    """PASS if f is identically zero, PASS_MOD_RELATION if zero modulo the
    parameter constraint, else None."""
    if equals_zero(f):
        return PASS
    if equals_zero(reduce_mod_relation(f)):
        return PASS_MOD_RELATION
    return None


def timed_check(report: Report, check_id: str, method: str, fn) -> CheckResult:
    """Run fn() -> (status, detail) under a timer, trapping errors as failures."""
    start = time.perf_counter()
    try:
        status, detail = fn()
    except Exception as exc:  # noqa: BLE001 - a failed check must not kill the suite
        status, detail = FAIL, f"{type(exc).__name__}: {exc}"
    elapsed = (time.perf_counter() - start) * 1000.0
    return report.add(CheckResult(check_id, method, status, detail, elapsed))
