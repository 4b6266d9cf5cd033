from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class ScaleCheck:
    statistic: float
    threshold: float
    exceeded: bool


@dataclass(frozen=True)
class TestDecision:
    """Outcome of one test on one sample.

    ``per_scale`` maps each scale to its statistic, threshold and verdict.
    Single-statistic tests (variance, HC, KS) report one entry under key 0.
    ``triggering_scale`` is the smallest exceeding scale, or None.
    """

    __test__ = False  # keep pytest from collecting this class

    reject: bool
    per_scale: dict[int, ScaleCheck] = field(default_factory=dict)
    triggering_scale: int | None = None

    @classmethod
    def from_checks(cls, checks: dict[int, ScaleCheck]) -> "TestDecision":
        hits = sorted(k for k, c in checks.items() if c.exceeded)
        return cls(reject=bool(hits), per_scale=dict(checks), triggering_scale=hits[0] if hits else None)

    @classmethod
    def single(cls, statistic: float, threshold: float) -> "TestDecision":
        return cls.from_checks({0: compare(statistic, threshold)})

    def to_dict(self) -> dict:
        out: dict = {"reject": self.reject}
        if self.triggering_scale is not None:
            out["triggering_scale"] = self.triggering_scale
        out["per_scale"] = [
            {
                "k": k,
                "statistic": c.statistic,
                # JSON has no infinity; an absent threshold means "never exceeded"
                "threshold": c.threshold if math.isfinite(c.threshold) else None,
                "exceeded": c.exceeded,
            }
            for k, c in sorted(self.per_scale.items())
        ]
        return out


def compare(statistic: float, threshold: float) -> ScaleCheck:
    # an infinite threshold can never be exceeded
    exceeded = math.isfinite(threshold) and statistic > threshold
    return ScaleCheck(float(statistic), float(threshold), bool(exceeded))
