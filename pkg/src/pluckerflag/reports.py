"""Machine-readable verification reports."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any


def _jsonable(x):
    import numpy as np
    from fractions import Fraction

    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    return x


@dataclass
class Report:
    """Outcome of one verification.

    ``passed`` holds iff there are no violations and every recorded check
    has ``expected == computed``.  Checks with ``expected=None`` are
    informational and always pass.
    """

    claim: str
    field: int
    counts: dict[str, Any] = field(default_factory=dict)
    checks: list[dict[str, Any]] = field(default_factory=list)
    violations: list[Any] = field(default_factory=list)

    def check(self, name: str, expected, computed) -> bool:
        ok = expected is None or expected == computed
        self.checks.append({"name": name, "expected": expected, "computed": computed, "pass": ok})
        return ok

    def violation(self, witness, limit: int = 50) -> None:
        # keep the first few witnesses; the count is what matters
        self.counts["violation_count"] = self.counts.get("violation_count", 0) + 1
        if len(self.violations) < limit:
            self.violations.append(witness)

    @property
    def passed(self) -> bool:
        return not self.violations and not self.counts.get("violation_count") and all(c["pass"] for c in self.checks)

    def to_dict(self) -> dict:
        return _jsonable(
            {
                "claim": self.claim,
                "field": self.field,
                "counts": self.counts,
                "checks": self.checks,
                "violations": self.violations,
                "pass": self.passed,
            }
        )

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kw)

    def merge(self, other: "Report", prefix: str = "") -> None:
        for k, v in other.counts.items():
            self.counts[prefix + k] = v
        for c in other.checks:
            self.checks.append(dict(c, name=prefix + c["name"]))
        for w in other.violations:
            self.violation(w)
