"""Check reports shared by the verification routines and the command line."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any


@dataclass
class Check:
    item: str
    verdict: bool
    witness: dict | None = None

    def to_dict(self) -> dict:
        return {"item": self.item, "verdict": bool(self.verdict), "witness": self.witness}


@dataclass
class Report:
    suite: str
    corpus: list[str] = field(default_factory=list)
    checks: list[Check] = field(default_factory=list)
    extra: dict[str, Any] = field(default_factory=dict)

    def add(self, item: str, verdict: bool, witness: dict | None = None) -> Check:
        c = Check(item, bool(verdict), witness)
        self.checks.append(c)
        return c

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.item, c.verdict, c.witness))
        for name in other.corpus:
            if name not in self.corpus:
                self.corpus.append(name)

    @property
    def agreement(self) -> bool:
        return all(c.verdict for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.verdict]

    def __bool__(self) -> bool:
        return self.agreement

    def to_dict(self) -> dict:
        out = {
            "suite": self.suite,
            "corpus": list(self.corpus),
            "checks": [c.to_dict() for c in sorted(self.checks, key=lambda c: c.item)],
            "agreement": self.agreement,
            "checks_run": len(self.checks),
        }
        out.update(self.extra)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=False, default=_jsonable) + "\n"


def _jsonable(x):
    try:
        return int(x)
    except (TypeError, ValueError):
        return str(x)


def valuation_witness(algebra, valuation: dict[str, int] | None, **more) -> dict | None:
    """Witness object naming the algebra and a valuation by element labels."""
    if valuation is None:
        return None
    out = {"algebra": algebra.name, "valuation": {k: algebra.label(v) for k, v in valuation.items()}}
    out.update(more)
    return out
