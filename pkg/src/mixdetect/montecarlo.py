"""Null-distribution simulation and empirical quantile conventions.

All thresholds use the same convention: the (1 - u)-quantile of ``B``
simulated values is their ``ceil((1 - u) * B)``-th order statistic, and a
test rejects when its statistic is strictly larger. With ``u = j / B`` the
in-sample rejection rate is exactly ``j / B``.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .dist import BaseDistribution
from .errors import CalibrationBudgetError, DomainError
from .streams import DOMAIN_CALIBRATION, run_blocks, stream

MIN_BUDGET = 1000
DEFAULT_BUDGET = 100_000


def check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    return alpha


def check_budget(budget: int) -> int:
    if int(budget) != budget or budget < MIN_BUDGET:
        raise CalibrationBudgetError(
            f"calibration budget must be an integer >= {MIN_BUDGET}, got {budget}"
        )
    return int(budget)


def check_size(n: int, minimum: int = 2) -> int:
    if int(n) != n or n < minimum:
        raise DomainError(f"sample size must be an integer >= {minimum}, got {n}")
    return int(n)


def simulate_null(
    statistic: Callable[[np.ndarray], np.ndarray],
    n: int,
    base: BaseDistribution,
    budget: int,
    seed: int,
    location: float = 0.0,
) -> np.ndarray:
    """Evaluate ``statistic`` on ``budget`` sorted null samples of size ``n``.

    ``statistic`` maps a ``(m, n)`` array of row-sorted samples to ``(m,)`` or
    ``(m, p)`` values. Samples are drawn at ``location`` (0 by default);
    callers only use statistics whose null law does not depend on the
    location, or tests whose null mean is known to be 0.
    """

    def block(b: int, m: int) -> np.ndarray:
        rng = stream(seed, DOMAIN_CALIBRATION, b)
        x = base.draw(rng, (m, n))
        if location:
            x += location
        x.sort(axis=1)
        return statistic(x)

    return np.concatenate(run_blocks(block, budget), axis=0)


def quantile_rank(level: float, budget: int) -> int:
    """1-based rank ``ceil((1 - level) * budget)`` of the upper quantile."""
    # rounding guard: 0.95 * 100000 must give 95000, not 95000.00000000001
    return max(1, min(budget, math.ceil(round((1.0 - level) * budget, 9))))


def upper_quantile(values: np.ndarray, level: float) -> float:
    """Empirical (1 - level)-quantile under the ceiling convention."""
    v = np.sort(np.asarray(values, dtype=float))
    return float(v[quantile_rank(level, v.size) - 1])


def minp_level(stats: np.ndarray, alpha: float) -> tuple[int, np.ndarray]:
    """Joint calibration of several upper-tail statistics.

    ``stats`` has one row per replicate and one column per statistic. Each
    replicate gets the rank ``1 + #{other replicates strictly larger}`` at
    every column; its smallest rank across columns decides the family-wise
    error. Returns ``j`` (so the adaptive level is ``j / B``) and the per
    column thresholds, each the ``(B - j)``-th order statistic.
    """
    stats = np.asarray(stats, dtype=float)
    budget, width = stats.shape
    ordered = np.sort(stats, axis=0)
    best = np.full(budget, budget + 1, dtype=np.int64)
    for c in range(width):
        larger = budget - np.searchsorted(ordered[:, c], stats[:, c], side="right")
        np.minimum(best, 1 + larger, out=best)
    allowed = math.floor(round(alpha * budget, 9))
    if allowed >= budget:
        j = budget - 1
    else:
        j = int(np.sort(best)[allowed]) - 1
    if j < 1:
        raise CalibrationBudgetError(
            f"budget {budget} too small to resolve level {alpha} over {width} statistics"
        )
    return j, ordered[budget - j - 1, :].copy()
