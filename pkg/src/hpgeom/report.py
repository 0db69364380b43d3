"""Deterministic run reports.

The JSON form is the contract: keys sorted, no wall-clock times and no
worker counts, so identical (command, parameters, seed) give identical
bytes.  The text form summarizes the same content."""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from typing import Any

import numpy as np

SCHEMA_VERSION = 1


def _plain(x: Any) -> Any:
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(_plain(v) for v in x)
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if hasattr(x, "to_json"):
        return _plain(x.to_json())
    return x


@dataclass
class Check:
    claim: str
    expected: Any
    computed: Any
    asserted: bool = True

    @property
    def match(self) -> bool:
        return self.expected == self.computed

    def to_json(self) -> dict:
        return {"claim": self.claim, "expected": _plain(self.expected), "computed": _plain(self.computed),
                "match": self.match, "asserted": self.asserted}


@dataclass
class RunReport:
    command: str
    parameters: dict
    field: dict | None = None
    results: dict = dc_field(default_factory=dict)
    checks: list[Check] = dc_field(default_factory=list)
    banners: list[str] = dc_field(default_factory=list)
    seed: int | None = None
    budget_exceeded: bool = False

    def check(self, claim: str, expected, computed, asserted: bool = True) -> Check:
        c = Check(claim, expected, computed, asserted)
        self.checks.append(c)
        return c

    @property
    def ok(self) -> bool:
        return not self.budget_exceeded and all(c.match for c in self.checks if c.asserted)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def to_json(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "command": self.command, "parameters": _plain(self.parameters),
                "field": _plain(self.field), "results": _plain(self.results),
                "checks": [c.to_json() for c in self.checks], "banners": list(self.banners),
                "seed": self.seed, "budget_exceeded": self.budget_exceeded, "ok": self.ok}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"

    def text(self) -> str:
        lines = [f"== {self.command} " + " ".join(f"{k}={v}" for k, v in sorted(self.parameters.items()))]
        for b in self.banners:
            lines.append(f"note: {b}")
        for k, v in sorted(_plain(self.results).items()):
            if isinstance(v, (dict, list)) and len(json.dumps(v)) > 100:
                v = f"<{type(v).__name__} of {len(v)}>"
            lines.append(f"  {k}: {v}")
        for c in self.checks:
            tag = "ok  " if c.match else ("FAIL" if c.asserted else "diff")
            lines.append(f"  [{tag}] {c.claim}: expected {_plain(c.expected)}, computed {_plain(c.computed)}"
                         + ("" if c.asserted else " (reported only)"))
        if self.budget_exceeded:
            lines.append("  budget exceeded: result inconclusive")
        lines.append("== " + ("PASS" if self.ok else "FAIL"))
        return "\n".join(lines) + "\n"
