"""Higher Criticism and Kolmogorov-Smirnov comparison tests.

Each statistic comes in a known-mean form (null density centred at 0) and
a plug-in form that centres the model at the sample mean, which makes it
usable when the null location is unknown.
"""

from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass

import numpy as np

from .decision import TestDecision
from .dist import BaseDistribution, as_sample
from .errors import ContractError, DomainError
from .montecarlo import DEFAULT_BUDGET, check_alpha, check_budget, check_size, simulate_null, upper_quantile

#: p-values are clipped into [P_CLIP, 1 - P_CLIP] before standardising
P_CLIP = 1e-12


class BaselineKind(str, enum.Enum):
    HC_KNOWN = "hc_known"
    HC_PLUGIN = "hc_plugin"
    KS_KNOWN = "ks_known"
    KS_PLUGIN = "ks_plugin"

    @classmethod
    def parse(cls, value: "BaselineKind | str") -> "BaselineKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower().replace("-", "_"))
        except ValueError:
            raise DomainError(f"unknown baseline statistic {value!r}") from None

    @property
    def plugin(self) -> bool:
        return self in (BaselineKind.HC_PLUGIN, BaselineKind.KS_PLUGIN)

    @property
    def is_hc(self) -> bool:
        return self in (BaselineKind.HC_KNOWN, BaselineKind.HC_PLUGIN)


class ClipAudit:
    """Thread-safe tally of clipped HC p-values."""

    def __init__(self):
        self._lock = threading.Lock()
        self.events = 0

    def add(self, count: int) -> None:
        if count:
            with self._lock:
                self.events += int(count)

    def reset(self) -> None:
        with self._lock:
            self.events = 0


clip_audit = ClipAudit()


def _model_coordinates(sorted_rows: np.ndarray, plugin: bool, literal: bool = False) -> np.ndarray:
    if not plugin:
        return sorted_rows
    if literal:
        # reads p_i = P(Z - mean > X_i) at face value; not location-free
        return sorted_rows + sorted_rows.mean(axis=-1, keepdims=True)
    # offsets from the sample minimum are exact under exact shifts
    y = sorted_rows - sorted_rows[..., :1]
    return y - y.mean(axis=-1, keepdims=True)


def ks_rows(sorted_rows: np.ndarray, base: BaseDistribution, plugin: bool = False) -> np.ndarray:
    """sqrt(n) sup |F_n - G| evaluated exactly at the jumps of F_n."""
    z = _model_coordinates(sorted_rows, plugin)
    n = z.shape[-1]
    g = base.cdf(z)
    i = np.arange(1, n + 1)
    above = np.max(i / n - g, axis=-1)
    below = np.max(g - (i - 1) / n, axis=-1)
    return math.sqrt(n) * np.maximum(above, below)


def hc_rows(
    sorted_rows: np.ndarray, base: BaseDistribution, plugin: bool = False, literal: bool = False
) -> np.ndarray:
    """max_i sqrt(n) (i/n - p_(i)) / sqrt(p_(i) (1 - p_(i))) over all i."""
    z = _model_coordinates(sorted_rows, plugin, literal)
    n = z.shape[-1]
    # ascending observations give descending upper-tail p-values
    p = base.survival(z[..., ::-1])
    clipped = np.clip(p, P_CLIP, 1.0 - P_CLIP)
    clip_audit.add(np.count_nonzero(clipped != p))
    i = np.arange(1, n + 1)
    hc = math.sqrt(n) * (i / n - clipped) / np.sqrt(clipped * (1.0 - clipped))
    return np.max(hc, axis=-1)


def ks_statistic(sample, base=BaseDistribution.GAUSSIAN, plugin: bool = False) -> float:
    x = np.sort(as_sample(sample))
    return float(ks_rows(x, BaseDistribution.parse(base), plugin))


def hc_statistic(sample, base=BaseDistribution.GAUSSIAN, plugin: bool = False, literal: bool = False) -> float:
    x = np.sort(as_sample(sample))
    return float(hc_rows(x, BaseDistribution.parse(base), plugin, literal))


def baseline_rows(sorted_rows, kind: BaselineKind, base: BaseDistribution, literal: bool = False) -> np.ndarray:
    if kind.is_hc:
        return hc_rows(sorted_rows, base, kind.plugin, literal)
    return ks_rows(sorted_rows, base, kind.plugin)


@dataclass(frozen=True)
class BaselineTable:
    n: int
    alpha: float
    threshold: float
    base: BaseDistribution
    statistic_kind: BaselineKind
    budget: int
    seed: int
    literal: bool = False
    schema = "mixdetect.baseline_table"
    schema_version = 1

    def statistics(self, sorted_rows: np.ndarray) -> np.ndarray:
        return baseline_rows(sorted_rows, self.statistic_kind, self.base, self.literal)

    def reject_batch(self, sorted_rows: np.ndarray) -> np.ndarray:
        return self.statistics(sorted_rows) > self.threshold

    def to_dict(self) -> dict:
        return {
            "schema": self.schema,
            "schema_version": self.schema_version,
            "n": self.n,
            "alpha": self.alpha,
            "threshold": self.threshold,
            "base": self.base.value,
            "statistic_kind": self.statistic_kind.value,
            "budget": self.budget,
            "seed": self.seed,
            "hc_plugin_literal": self.literal,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "BaselineTable":
        return cls(
            n=int(doc["n"]),
            alpha=float(doc["alpha"]),
            threshold=float(doc["threshold"]),
            base=BaseDistribution.parse(doc["base"]),
            statistic_kind=BaselineKind.parse(doc["statistic_kind"]),
            budget=int(doc["budget"]),
            seed=int(doc["seed"]),
            literal=bool(doc.get("hc_plugin_literal", False)),
        )


def calibrate_baseline(
    kind,
    n: int,
    base=BaseDistribution.GAUSSIAN,
    alpha: float = 0.05,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    literal: bool = False,
    location: float = 0.0,
) -> BaselineTable:
    """Simulated (1 - alpha)-quantile of a baseline statistic under the null.

    ``location`` moves the simulated null; it only makes sense to change it
    for the plug-in statistics, whose law does not depend on it.
    """
    kind = BaselineKind.parse(kind)
    n = check_size(n, minimum=1)
    alpha = check_alpha(alpha)
    budget = check_budget(budget)
    base = BaseDistribution.parse(base)
    literal = bool(literal) and kind is BaselineKind.HC_PLUGIN
    values = simulate_null(lambda x: baseline_rows(x, kind, base, literal), n, base, budget, seed, location)
    return BaselineTable(
        n=n,
        alpha=alpha,
        threshold=upper_quantile(values, alpha),
        base=base,
        statistic_kind=kind,
        budget=budget,
        seed=int(seed),
        literal=literal,
    )


def run_baseline(sample, table: BaselineTable) -> TestDecision:
    x = np.sort(as_sample(sample))
    if x.size != table.n:
        raise ContractError(f"sample has {x.size} observations, table was calibrated for n={table.n}")
    return TestDecision.single(float(table.statistics(x)), table.threshold)
