"""Check records and deterministic report rendering."""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["CheckResult", "Report", "residual_check", "gap_check", "info_record"]

TOOL_VERSION = "0.1.0"


@dataclass
class CheckResult:
    """One named verification record.

    kind is "residual" (pass iff value <= tolerance), "gap" (pass iff
    value >= -tolerance) or "info" (never affects the exit status).
    """

    name: str
    reference: str
    samples: int
    value: float
    tolerance: float
    kind: str = "residual"
    passed: bool = True
    notes: str = ""

    @property
    def informational(self):
        return self.kind == "info"


def residual_check(name, reference, samples, value, tolerance, notes=""):
    return CheckResult(
        name=name,
        reference=reference,
        samples=samples,
        value=float(value),
        tolerance=float(tolerance),
        kind="residual",
        passed=bool(value <= tolerance),
        notes=notes,
    )


def gap_check(name, reference, samples, value, tolerance, notes=""):
    return CheckResult(
        name=name,
        reference=reference,
        samples=samples,
        value=float(value),
        tolerance=float(tolerance),
        kind="gap",
        passed=bool(value >= -tolerance),
        notes=notes,
    )


def info_record(name, reference, samples, value, notes=""):
    return CheckResult(
        name=name,
        reference=reference,
        samples=samples,
        value=float(value),
        tolerance=0.0,
        kind="info",
        passed=True,
        notes=notes,
    )


@dataclass
class Report:
    """Ordered collection of check records for one scenario run."""

    scenario: str
    seed: int
    samples: int
    checks: list = field(default_factory=list)

    def extend(self, results):
        self.checks.extend(results)

    def add(self, result):
        self.checks.append(result)

    @property
    def passed(self):
        return all(c.passed for c in self.checks if not c.informational)

    def summary(self):
        ok = sum(1 for c in self.checks if not c.informational and c.passed)
        bad = sum(1 for c in self.checks if not c.informational and not c.passed)
        info = sum(1 for c in self.checks if c.informational)
        return ok, bad, info

    def render(self):
        """Stable plain-text rendering; byte-identical for identical inputs."""
        lines = []
        lines.append(f"tool-version: {TOOL_VERSION}")
        lines.append(f"scenario: {self.scenario}")
        lines.append(f"seed: {self.seed}")
        lines.append(f"samples: {self.samples}")
        lines.append("checks:")
        for c in self.checks:
            lines.append(f"  - name: {c.name}")
            lines.append(f"    reference: {c.reference}")
            lines.append(f"    kind: {c.kind}")
            lines.append(f"    samples: {c.samples}")
            lines.append(f"    value: {c.value:.12e}")
            lines.append(f"    tolerance: {c.tolerance:.3e}")
            lines.append(f"    pass: {'true' if c.passed else 'false'}")
            if c.notes:
                lines.append(f"    notes: {c.notes}")
        ok, bad, info = self.summary()
        lines.append(f"summary: passed={ok} failed={bad} informational={info}")
        return "\n".join(lines) + "\n"

    def human_lines(self):
        out = []
        for c in self.checks:
            if c.informational:
                flag = "INFO"
            else:
                flag = "PASS" if c.passed else "FAIL"
            out.append(f"[{flag}] {c.name}: value={c.value:.3e} tol={c.tolerance:.1e}")
        ok, bad, info = self.summary()
        out.append(f"passed={ok} failed={bad} informational={info}")
        return out
