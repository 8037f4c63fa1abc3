"""Check reports with pass/fail/skip verdicts and witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field

PASS, FAIL, SKIP = "pass", "fail", "skip"


@dataclass
class Check:
    name: str
    status: str
    detail: str = ""


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, ok: bool, witness: object = None, detail: str = "") -> bool:
        if not ok and witness is not None:
            detail = f"{detail} witness={witness}".strip()
        self.checks.append(Check(name, PASS if ok else FAIL, detail))
        return ok

    def skip(self, name: str, reason: str) -> None:
        self.checks.append(Check(name, SKIP, reason))

    def note(self, name: str, detail: str) -> None:
        """A passing informational line (a computed finding, not a verdict)."""
        self.checks.append(Check(name, PASS, detail))

    def extend(self, other: "Report", prefix: str | None = None) -> "Report":
        pre = f"{prefix}." if prefix else ""
        for c in other.checks:
            self.checks.append(Check(pre + c.name, c.status, c.detail))
        return self

    @property
    def ok(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    def __bool__(self) -> bool:
        return self.ok

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    def get(self, name: str) -> Check | None:
        for c in self.checks:
            if c.name == name:
                return c
        return None

    def counts(self) -> dict[str, int]:
        out = {PASS: 0, FAIL: 0, SKIP: 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    def render(self, fmt: str = "text") -> str:
        ordered = sorted(self.checks, key=lambda c: c.name)
        counts = self.counts()
        if fmt == "kv":
            lines = [f"report={self.title}"]
            for c in ordered:
                line = f"check={c.name} status={c.status}"
                if c.detail:
                    line += f" detail={c.detail!r}"
                lines.append(line)
            lines.append(f"summary pass={counts[PASS]} fail={counts[FAIL]} skip={counts[SKIP]} ok={str(self.ok).lower()}")
            return "\n".join(lines)
        lines = [f"== {self.title}"]
        for c in ordered:
            tail = f"  ({c.detail})" if c.detail else ""
            lines.append(f"[{c.status.upper():4}] {c.name}{tail}")
        lines.append(f"-- {counts[PASS]} passed, {counts[FAIL]} failed, {counts[SKIP]} skipped")
        return "\n".join(lines)
