"""Multi-scale order-statistics spacing test.

For each dyadic scale ``k`` the test looks at the spacing
``D_k = X(n-k+1) - X(k)`` between the k-th largest and k-th smallest
observations. Under the null the spacings do not depend on the unknown
location, so their quantiles can be simulated once from the base density.
The test rejects when any spacing exceeds its quantile at the adaptive
per-scale level ``alpha_n`` chosen so the family-wise level is ``alpha``.

The one-sided contamination variant replaces ``D_k`` by ``X(n-k+1)`` and
assumes the null location is known to be 0.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .decision import TestDecision, compare
from .dist import BaseDistribution, as_sample
from .errors import ContractError, DomainError
from .montecarlo import DEFAULT_BUDGET, check_alpha, check_budget, check_size, minp_level, simulate_null


class Variant(str, enum.Enum):
    SPACING = "two_sided_spacing"
    CONTAMINATION = "one_sided_contamination"

    @classmethod
    def parse(cls, value: "Variant | str") -> "Variant":
        if isinstance(value, cls):
            return value
        aliases = {"spacing": cls.SPACING, "contamination": cls.CONTAMINATION}
        try:
            return aliases.get(str(value)) or cls(str(value))
        except ValueError:
            raise DomainError(f"unknown spacing-test variant {value!r}") from None


def dyadic_scales(n: int) -> tuple[int, ...]:
    """Powers of two ``2**j`` with ``0 <= j <= floor(log2(n / 2))``."""
    n = check_size(n)
    # floor(log2(n / 2)) without floating point
    top = n.bit_length() - 2
    return tuple(1 << j for j in range(top + 1))


def scale_matrix(sorted_rows: np.ndarray, scales, variant=Variant.SPACING) -> np.ndarray:
    """Per-scale statistics for a ``(m, n)`` block of row-sorted samples."""
    n = sorted_rows.shape[-1]
    top = np.array([n - k for k in scales])
    if Variant.parse(variant) is Variant.CONTAMINATION:
        return sorted_rows[..., top]
    bottom = np.array([k - 1 for k in scales])
    return sorted_rows[..., top] - sorted_rows[..., bottom]


def spacing_statistics(sample, scales=None) -> dict[int, float]:
    """``{k: X(n-k+1) - X(k)}`` for every scale ``k``."""
    x = np.sort(as_sample(sample))
    scales = dyadic_scales(x.size) if scales is None else tuple(scales)
    if max(scales) > x.size // 2:
        raise ContractError(f"scales {scales} do not fit a sample of size {x.size}")
    values = scale_matrix(x, scales)
    return {k: float(v) for k, v in zip(scales, values)}


def analytic_threshold(n: int, k: int, alpha: float, base=BaseDistribution.GAUSSIAN) -> float:
    """Explicit upper bound ``t`` on the spacing quantile at scale ``k``.

    Solves ``survival(t / 2) = (k / n) * (1 - sqrt(2 log(4 / alpha) / k))``
    when ``k > 2 log(4 / alpha)``; returns ``math.inf`` otherwise.
    """
    n = check_size(n)
    alpha = check_alpha(alpha)
    if int(k) != k or not 1 <= k <= n / 2:
        raise DomainError(f"scale must satisfy 1 <= k <= n/2, got k={k}, n={n}")
    log_term = 2.0 * math.log(4.0 / alpha)
    if not k > log_term:
        return math.inf
    target = (k / n) * (1.0 - math.sqrt(log_term / k))
    return 2.0 * float(BaseDistribution.parse(base).inverse_survival(target))


@dataclass(frozen=True)
class CalibrationTable:
    """Simulated per-scale quantiles at the adaptive level ``alpha_n``."""

    n: int
    alpha: float
    alpha_n: float
    quantiles: dict[int, float]
    base: BaseDistribution
    budget: int
    seed: int
    variant: Variant = Variant.SPACING
    schema = "mixdetect.spacing_table"
    schema_version = 1

    @property
    def scales(self) -> tuple[int, ...]:
        return tuple(sorted(self.quantiles))

    @property
    def threshold_vector(self) -> np.ndarray:
        return np.array([self.quantiles[k] for k in self.scales])

    def statistics(self, sorted_rows: np.ndarray) -> np.ndarray:
        return scale_matrix(sorted_rows, self.scales, self.variant)

    def reject_batch(self, sorted_rows: np.ndarray) -> np.ndarray:
        """Vectorised decisions for a ``(m, n)`` block of row-sorted samples."""
        return np.any(self.statistics(sorted_rows) > self.threshold_vector, axis=-1)

    def to_dict(self) -> dict:
        return {
            "schema": self.schema,
            "schema_version": self.schema_version,
            "n": self.n,
            "alpha": self.alpha,
            "alpha_n": self.alpha_n,
            "variant": self.variant.value,
            "base": self.base.value,
            "budget": self.budget,
            "seed": self.seed,
            "quantiles": [{"k": k, "q": self.quantiles[k]} for k in self.scales],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "CalibrationTable":
        return cls(
            n=int(doc["n"]),
            alpha=float(doc["alpha"]),
            alpha_n=float(doc["alpha_n"]),
            quantiles={int(e["k"]): float(e["q"]) for e in doc["quantiles"]},
            base=BaseDistribution.parse(doc["base"]),
            budget=int(doc["budget"]),
            seed=int(doc["seed"]),
            variant=Variant.parse(doc["variant"]),
        )


def calibrate(
    n: int,
    base=BaseDistribution.GAUSSIAN,
    alpha: float = 0.05,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    variant=Variant.SPACING,
) -> CalibrationTable:
    """Monte Carlo calibration of the multi-scale test by the min-p method."""
    n = check_size(n)
    alpha = check_alpha(alpha)
    budget = check_budget(budget)
    base = BaseDistribution.parse(base)
    variant = Variant.parse(variant)
    scales = dyadic_scales(n)

    stats = simulate_null(lambda x: scale_matrix(x, scales, variant), n, base, budget, seed)
    j, q = minp_level(stats, alpha)
    return CalibrationTable(
        n=n,
        alpha=alpha,
        alpha_n=j / budget,
        quantiles={k: float(v) for k, v in zip(scales, q)},
        base=base,
        budget=budget,
        seed=int(seed),
        variant=variant,
    )


def run_test(sample, table: CalibrationTable) -> TestDecision:
    x = np.sort(as_sample(sample))
    if x.size != table.n:
        raise ContractError(f"sample has {x.size} observations, table was calibrated for n={table.n}")
    values = table.statistics(x)
    checks = {k: compare(v, table.quantiles[k]) for k, v in zip(table.scales, values)}
    return TestDecision.from_checks(checks)
