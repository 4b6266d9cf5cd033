"""Variance test: reject when the sample variance exceeds its null quantile.

Mixing two translates of the base density inflates the variance by
``eps (1 - eps) (mu2 - mu1)**2``, so a large ``S_n^2`` is evidence of a
mixture. The null law of ``S_n^2`` is location-free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .decision import TestDecision
from .dist import BaseDistribution, as_sample
from .errors import ContractError, DomainError
from .montecarlo import DEFAULT_BUDGET, check_alpha, check_budget, check_size, simulate_null, upper_quantile


def variance_rows(x: np.ndarray) -> np.ndarray:
    """Unbiased variance along the last axis, two-pass.

    Values are first taken relative to the first observation, which keeps
    the result bit-identical under any shift that is itself exact.
    """
    y = x - x[..., :1]
    centred = y - y.mean(axis=-1, keepdims=True)
    return np.einsum("...i,...i->...", centred, centred) / (x.shape[-1] - 1)


def sample_variance(sample) -> float:
    x = as_sample(sample)
    if x.size < 2:
        raise DomainError("sample variance needs at least two observations")
    return float(variance_rows(x))


def wilks_variance_bound(n: int, fourth_central_moment: float, variance: float) -> float:
    """Upper bound on Var(S_n^2) from the fourth and second central moments."""
    n = check_size(n)
    if variance < 0 or fourth_central_moment < 0:
        raise DomainError("moments must be nonnegative")
    if fourth_central_moment < variance**2:
        raise DomainError("fourth central moment cannot be below the squared variance")
    return (fourth_central_moment - (n - 3) / (n - 1) * variance**2) / n


@dataclass(frozen=True)
class VarianceTable:
    n: int
    alpha: float
    v_alpha_n: float
    sigma2: float
    fourth_moment_bound: float
    base: BaseDistribution
    budget: int
    seed: int
    schema = "mixdetect.variance_table"
    schema_version = 1

    @property
    def analytic_threshold(self) -> float:
        """Chebyshev bound ``sigma2 + sqrt(B / (n alpha))`` on ``v_alpha_n``."""
        return self.sigma2 + math.sqrt(self.fourth_moment_bound / (self.n * self.alpha))

    def threshold(self, analytic: bool = False) -> float:
        return self.analytic_threshold if analytic else self.v_alpha_n

    def reject_batch(self, sorted_rows: np.ndarray, analytic: bool = False) -> np.ndarray:
        return variance_rows(sorted_rows) > self.threshold(analytic)

    def to_dict(self) -> dict:
        return {
            "schema": self.schema,
            "schema_version": self.schema_version,
            "n": self.n,
            "alpha": self.alpha,
            "v_alpha_n": self.v_alpha_n,
            "sigma2": self.sigma2,
            "fourth_moment_bound": self.fourth_moment_bound,
            "base": self.base.value,
            "budget": self.budget,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "VarianceTable":
        return cls(
            n=int(doc["n"]),
            alpha=float(doc["alpha"]),
            v_alpha_n=float(doc["v_alpha_n"]),
            sigma2=float(doc["sigma2"]),
            fourth_moment_bound=float(doc["fourth_moment_bound"]),
            base=BaseDistribution.parse(doc["base"]),
            budget=int(doc["budget"]),
            seed=int(doc["seed"]),
        )


def calibrate_variance(
    n: int,
    base=BaseDistribution.GAUSSIAN,
    alpha: float = 0.05,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
) -> VarianceTable:
    n = check_size(n)
    alpha = check_alpha(alpha)
    budget = check_budget(budget)
    base = BaseDistribution.parse(base)
    s2 = simulate_null(variance_rows, n, base, budget, seed)
    return VarianceTable(
        n=n,
        alpha=alpha,
        v_alpha_n=upper_quantile(s2, alpha),
        sigma2=base.variance,
        fourth_moment_bound=base.fourth_moment,
        base=base,
        budget=budget,
        seed=int(seed),
    )


def run_variance_test(sample, table: VarianceTable, analytic: bool = False) -> TestDecision:
    """Reject when ``S_n^2`` exceeds the simulated quantile (or, with
    ``analytic=True``, the conservative moment bound)."""
    x = as_sample(sample)
    if x.size != table.n:
        raise ContractError(f"sample has {x.size} observations, table was calibrated for n={table.n}")
    return TestDecision.single(float(variance_rows(x)), table.threshold(analytic))
