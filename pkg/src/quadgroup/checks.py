"""Check records shared by every verification routine."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

PASS, FAIL, SKIPPED = "PASS", "FAIL", "SKIPPED"
DEFAULT_BUDGET = 10**7


def jsonable(x: Any) -> Any:
    """Convert numpy scalars, tuples and nested containers into plain JSON values."""
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "item") and not isinstance(x, (str, bytes)):
        return x.item()
    return x


@dataclass
class Check:
    name: str
    status: str
    detail: str = ""
    witness: Any = None

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_json(self) -> dict:
        out = {"claim": self.name, "status": self.status}
        if self.detail:
            out["detail"] = self.detail
        if self.witness is not None:
            out["witness"] = jsonable(self.witness)
        return out


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)
    info: dict = field(default_factory=dict)

    def add(self, name: str, ok: bool, witness: Any = None, detail: str = "") -> Check:
        c = Check(name, PASS if ok else FAIL, detail, None if ok else witness)
        self.checks.append(c)
        return c

    def skip(self, name: str, reason: str) -> Check:
        c = Check(name, SKIPPED, reason)
        self.checks.append(c)
        return c

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.status, c.detail, c.witness))

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def ok(self) -> bool:
        """True when nothing failed (skips do not count against it)."""
        return all(c.status != FAIL for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    def counts(self) -> tuple[int, int, int]:
        p = sum(c.status == PASS for c in self.checks)
        f = sum(c.status == FAIL for c in self.checks)
        return p, f, len(self.checks) - p - f

    def to_json(self) -> dict:
        out = {"title": self.title, "checks": [c.to_json() for c in self.checks]}
        if self.info:
            out["info"] = jsonable(self.info)
        return out

    def lines(self) -> list[str]:
        out = [self.title]
        w = max((len(c.name) for c in self.checks), default=0)
        for c in self.checks:
            line = f"  {c.name.ljust(w)}  {c.status}"
            if c.detail:
                line += f"  ({c.detail})"
            if c.witness is not None:
                line += f"  witness={json.dumps(jsonable(c.witness))}"
            out.append(line)
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())
