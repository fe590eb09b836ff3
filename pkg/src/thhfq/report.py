"""Pass/fail reports shared by the scenario layer and the CLI."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any


@dataclass
class Claim:
    description: str
    expected: Any
    computed: Any
    passed: bool
    note: str = ""

    def to_json(self) -> dict:
        out = {"description": self.description, "expected": _plain(self.expected),
               "computed": _plain(self.computed), "pass": bool(self.passed)}
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class Report:
    scenario: str
    params: dict
    claims: list[Claim] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def claim(self, description: str, expected: Any, computed: Any, passed: bool | None = None,
              note: str = "") -> Claim:
        ok = (expected == computed) if passed is None else passed
        c = Claim(description, expected, computed, bool(ok), note)
        self.claims.append(c)
        return c

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims)

    def first_failure(self) -> Claim | None:
        return next((c for c in self.claims if not c.passed), None)

    def to_json(self) -> dict:
        out = {"scenario": self.scenario, "params": self.params,
               "claims": [c.to_json() for c in self.claims], "pass": self.passed}
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    def to_text(self) -> str:
        head = f"{self.scenario} {json.dumps(self.params, sort_keys=True)}: {'PASS' if self.passed else 'FAIL'}"
        lines = [head]
        for c in self.claims:
            lines.append(f"  [{'ok' if c.passed else 'FAIL'}] {c.description}")
            if not c.passed or c.note:
                lines.append(f"        expected {_short(c.expected)}; computed {_short(c.computed)}"
                             + (f" ({c.note})" if c.note else ""))
        for n in self.notes:
            lines.append(f"  note: {n}")
        return "\n".join(lines)


def _plain(x: Any) -> Any:
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if hasattr(x, "item"):
        return x.item()
    return x


def _short(x: Any, limit: int = 160) -> str:
    text = json.dumps(_plain(x)) if not isinstance(x, str) else x
    return text if len(text) <= limit else text[: limit - 3] + "..."
