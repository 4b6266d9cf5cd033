"""Closed-form separation radii, detection boundaries and side conditions."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .dist import BaseDistribution, MixtureParams
from .errors import DomainError
from .montecarlo import check_alpha, check_size
from .spacing import analytic_threshold, dyadic_scales

#: half-width (in points) of the witness grid searched by separation_set_member
WITNESS_GRID = 2048
#: strict inequalities are read as ">= rho + STRICT_MARGIN"
STRICT_MARGIN = 1e-12


def _check_beta(alpha: float, beta: float) -> None:
    if not 0.0 < beta < 1.0 - alpha:
        raise DomainError(f"beta must lie in (0, 1 - alpha), got beta={beta}, alpha={alpha}")


def rho_lower_bound(n: int, alpha: float, beta: float, M: float) -> float:
    """Minimax lower bound on the separation ``eps (1 - eps) (mu2 - mu1)**2``
    for Gaussian mixtures with ``mu2 - mu1 <= M``: below it no level-alpha
    test has type-II error at most beta over the whole class."""
    n = check_size(n, minimum=1)
    alpha = check_alpha(alpha)
    _check_beta(alpha, beta)
    if not M > 0:
        raise DomainError(f"M must be positive, got {M}")
    c = 1.0 - (1.0 - alpha - beta) ** 2 / 2.0
    C = math.sqrt(0.5 + (2.0 * M**2 / 3.0) * math.exp(M**2 / 4.0))
    log_c = math.log(c)
    return math.sqrt(-2.0 * log_c / n) * math.sqrt(1.0 + log_c / (2.0 * n)) / C


def rho_k_n(k: int, n: int, beta: float) -> float:
    """Probability margin ``k/n + (1 + sqrt(1 + 2 k beta)) / (n beta)`` that
    guarantees power ``1 - beta`` at scale ``k``."""
    n = check_size(n)
    if int(k) != k or not 1 <= k <= n / 2:
        raise DomainError(f"scale must satisfy 1 <= k <= n/2, got k={k}, n={n}")
    if not 0.0 < beta < 1.0:
        raise DomainError(f"beta must lie in (0, 1), got {beta}")
    return k / n + (1.0 + math.sqrt(1.0 + 2.0 * k * beta)) / (n * beta)


def adaptive_rate(n: int) -> float:
    """Shape ``sqrt(log log n / n)`` of the separation rate of the adaptive test."""
    if n <= math.e:
        raise DomainError("the adaptive rate needs n > e")
    return math.sqrt(math.log(math.log(n)) / n)


def working_level(n: int, alpha: float, table=None) -> float:
    """Per-scale level: the calibrated ``alpha_n`` if a table is given,
    otherwise the Bonferroni value ``alpha / |K_n|``."""
    if table is not None:
        return float(table.alpha_n)
    return check_alpha(alpha) / len(dyadic_scales(n))


def threshold_ceiling(n: int, exponent: float) -> float:
    """``2 sqrt(2 D log n)``: bounds the analytic threshold at scales with
    ``k >= 8 log(4/alpha_n)`` and ``k/n >= n**-D``."""
    if not 0.0 < exponent < 1.0:
        raise DomainError("the scale exponent must lie in (0, 1)")
    return 2.0 * math.sqrt(2.0 * exponent * math.log(n))


class Membership(NamedTuple):
    member: bool
    witness: float | None


def separation_margins(eps: float, separation: float, t: float, c, base=BaseDistribution.GAUSSIAN):
    """The two left-hand sides whose minimum must exceed rho at witness ``c``."""
    sf = BaseDistribution.parse(base).survival
    c = np.asarray(c, dtype=float)
    upper = (1.0 - eps) * sf(t - c + eps * separation) + eps * sf(t - c - (1.0 - eps) * separation)
    lower = (1.0 - eps) * sf(c - eps * separation) + eps * sf(c + (1.0 - eps) * separation)
    return upper, lower


def separation_set_member(
    eps: float,
    mu1: float,
    mu2: float,
    alpha_n: float,
    rho: float,
    k: int,
    n: int,
    base=BaseDistribution.GAUSSIAN,
    grid: int = WITNESS_GRID,
) -> Membership:
    """Whether ``(eps, mu1, mu2)`` lies in the scale-``k`` separation set.

    The existential witness ``c`` is searched on a grid of ``2 * grid + 1``
    points centred at ``t / 2``; the returned witness is the passing grid
    point closest to ``t / 2``.
    """
    params = MixtureParams(eps, mu1, mu2, base)
    if int(k) not in dyadic_scales(n):
        raise DomainError(f"k={k} is not a dyadic scale of n={n}")
    t = analytic_threshold(n, k, alpha_n, params.base)
    if not math.isfinite(t):
        return Membership(False, None)
    span = t / 2.0 + params.separation + 10.0
    c = t / 2.0 + np.arange(-grid, grid + 1) * (span / grid)
    upper, lower = separation_margins(eps, params.separation, t, c, params.base)
    worst = np.minimum(upper, lower)
    ok = worst >= rho + STRICT_MARGIN
    if not ok.any():
        return Membership(False, None)
    # the maximin margin is often flat to rounding, so prefer the centre
    return Membership(True, float(c[np.argmin(np.where(ok, np.abs(c - t / 2.0), np.inf))]))


class Regime(str, enum.Enum):
    DENSE = "dense"
    SPARSE_GAUSSIAN = "sparse_gaussian"
    SPARSE_LAPLACE = "sparse_laplace"

    @classmethod
    def parse(cls, value: "Regime | str") -> "Regime":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower().replace("-", "_"))
        except ValueError:
            raise DomainError(f"unknown regime {value!r}") from None

    def delta_range(self) -> tuple[float, float]:
        return (0.0, 0.5) if self is Regime.DENSE else (0.5, 1.0)


def detection_boundary(regime, delta: float) -> float:
    """Critical signal exponent ``r*(delta)`` of the given asymptotic regime."""
    regime = Regime.parse(regime)
    if regime is Regime.DENSE:
        if not 0.0 < delta <= 0.5:
            raise DomainError(f"dense regime needs 0 < delta <= 1/2, got {delta}")
        return 0.25 - delta / 2.0
    if not 0.5 < delta < 1.0:
        raise DomainError(f"sparse regimes need 1/2 < delta < 1, got {delta}")
    if regime is Regime.SPARSE_LAPLACE:
        return 2.0 * delta - 1.0
    if delta < 0.75:
        return delta - 0.5
    return (1.0 - math.sqrt(1.0 - delta)) ** 2


@dataclass(frozen=True)
class RegimePoint:
    """Asymptotic parametrisation: ``eps ~ n**-delta`` and a separation
    ``n**-r`` (dense), ``sqrt(2 r log n)`` (sparse Gaussian) or ``r log n``
    (sparse Laplace)."""

    delta: float
    r: float
    regime: Regime

    def __post_init__(self):
        object.__setattr__(self, "regime", Regime.parse(self.regime))
        if self.regime is Regime.DENSE:
            ok = 0.0 < self.delta <= 0.5 and 0.0 < self.r < 0.5
        else:
            ok = 0.5 < self.delta < 1.0 and 0.0 < self.r < 1.0
        if not ok:
            raise DomainError(f"({self.delta}, {self.r}) is outside the {self.regime.value} regime")

    @property
    def r_star(self) -> float:
        return detection_boundary(self.regime, self.delta)

    @property
    def detectable(self) -> bool:
        # dense separations shrink like n**-r, so smaller r is easier
        if self.regime is Regime.DENSE:
            return self.r < self.r_star
        return self.r > self.r_star

    def parameters(self, n: int) -> tuple[float, float]:
        """``(eps, mu2 - mu1)`` at sample size ``n``."""
        eps = n ** -self.delta
        if self.regime is Regime.DENSE:
            return eps, n ** -self.r
        if self.regime is Regime.SPARSE_GAUSSIAN:
            return eps, math.sqrt(2.0 * self.r * math.log(n))
        return eps, self.r * math.log(n)


@dataclass(frozen=True)
class SideConditionReport:
    n: int
    alpha: float
    alpha_n_floor: float
    power_guarantee_bound: float
    power_guarantee_holds: bool
    dense_upper_lhs: float | None
    dense_upper_rhs: float | None
    dense_upper_holds: bool | None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "alpha": self.alpha,
            "alpha_n_floor": None if math.isnan(self.alpha_n_floor) else self.alpha_n_floor,
            "power_guarantee": {
                "condition": "n >= 8 log(4 log2(n/2) / alpha)",
                "bound": self.power_guarantee_bound if math.isfinite(self.power_guarantee_bound) else None,
                "holds": self.power_guarantee_holds,
            },
            "dense_upper_bound": None
            if self.dense_upper_holds is None
            else {
                "condition": "8.25 log(4 log2(n/2) / alpha) / n <= P(Z > M)",
                "lhs": self.dense_upper_lhs if math.isfinite(self.dense_upper_lhs) else None,
                "rhs": self.dense_upper_rhs,
                "holds": self.dense_upper_holds,
            },
        }


def check_side_conditions(n: int, alpha: float, M: float | None = None, base=BaseDistribution.GAUSSIAN):
    """Evaluate the sample-size conditions of the power results.

    Both use the conservative substitution ``alpha_n >= alpha / log2(n/2)``.
    The dense-regime condition is only evaluated when ``M`` is given.
    """
    n = check_size(n, minimum=1)
    alpha = check_alpha(alpha)
    base = BaseDistribution.parse(base)
    log_scales = math.log2(n / 2.0) if n > 2 else 0.0
    if log_scales > 0:
        log_term = math.log(4.0 * log_scales / alpha)
        floor_level = alpha / log_scales
    else:
        log_term = math.inf
        floor_level = math.nan
    guarantee_bound = 8.0 * log_term
    lhs = rhs = holds = None
    if M is not None:
        if not M > 0:
            raise DomainError(f"M must be positive, got {M}")
        lhs = 8.25 * log_term / n
        rhs = float(base.survival(M))
        holds = n >= 3 and lhs <= rhs
    return SideConditionReport(
        n=n,
        alpha=alpha,
        alpha_n_floor=floor_level,
        power_guarantee_bound=guarantee_bound,
        power_guarantee_holds=bool(n >= guarantee_bound),
        dense_upper_lhs=lhs,
        dense_upper_rhs=rhs,
        dense_upper_holds=holds,
    )
