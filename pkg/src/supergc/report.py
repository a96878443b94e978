"""Check reports and their text/JSON serialization."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

SCHEMA_VERSION = 1


class IoError(Exception):
    pass


@dataclass
class Check:
    name: str
    ok: bool
    expected: Optional[str] = None
    actual: Optional[str] = None
    witness: Optional[str] = None
    note: Optional[str] = None
    # expressions whose printed forms appear in the check; not serialized
    exprs: tuple = field(default=(), repr=False, compare=False)

    def as_dict(self) -> dict:
        d = {"name": self.name, "status": "pass" if self.ok else "fail"}
        for k in ("expected", "actual", "witness", "note"):
            v = getattr(self, k)
            if v is not None:
                d[k] = v
        return d


@dataclass
class Report:
    scenario: str
    checks: list
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self):
        return [c for c in self.checks if not c.ok]

    def sorted(self) -> "Report":
        return Report(self.scenario, sorted(self.checks, key=lambda c: c.name), self.seconds)

    def as_dict(self, timing: bool = False) -> dict:
        d = {
            "scenario": self.scenario,
            "status": "pass" if self.ok else "fail",
            "passed": sum(c.ok for c in self.checks),
            "total": len(self.checks),
            "checks": [c.as_dict() for c in self.checks],
        }
        if timing:
            d["seconds"] = round(self.seconds, 3)
        return d


def to_json(reports, timing: bool = False) -> str:
    doc = {
        "schema": "supergc-report",
        "version": SCHEMA_VERSION,
        "status": "pass" if all(r.ok for r in reports) else "fail",
        "reports": [r.as_dict(timing) for r in reports],
    }
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def to_text(reports, timing: bool = False, verbose: bool = False) -> str:
    lines = []
    for r in reports:
        head = f"[{'PASS' if r.ok else 'FAIL'}] {r.scenario}: {sum(c.ok for c in r.checks)}/{len(r.checks)}"
        if timing:
            head += f" ({r.seconds:.2f}s)"
        lines.append(head)
        for c in r.checks:
            if c.ok and not verbose:
                continue
            lines.append(f"  {'ok  ' if c.ok else 'FAIL'} {c.name}")
            if c.ok and c.actual is not None:
                lines.append(f"       value: {c.actual}")
            if not c.ok:
                for k in ("expected", "actual", "witness"):
                    v = getattr(c, k)
                    if v is not None:
                        lines.append(f"       {k}: {v}")
            if c.note:
                lines.append(f"       note: {c.note}")
    return "\n".join(lines) + "\n"


def emit(reports, fmt: str = "text", path: Optional[str] = None,
         timing: bool = False, verbose: bool = False) -> int:
    """Write the reports; returns the exit code (1 iff any check failed)."""
    if isinstance(reports, Report):
        reports = [reports]
    if fmt == "json":
        out = to_json(reports, timing)
    elif fmt == "text":
        out = to_text(reports, timing, verbose)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is None:
        import sys
        sys.stdout.write(out)
    else:
        try:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(out)
        except OSError as exc:
            raise IoError(str(exc)) from exc
    return 0 if all(r.ok for r in reports) else 1
