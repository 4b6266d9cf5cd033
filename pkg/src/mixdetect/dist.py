"""Even base densities, their tails, and seeded sampling of pure and
two-component location mixtures."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from .errors import DomainError

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)

# bracket and absolute tolerance for the Gaussian tail inversion
_BRACKET = 40.0
_XTOL = 1e-13


class BaseDistribution(str, enum.Enum):
    """Standardised even density shared by both mixture components."""

    GAUSSIAN = "gaussian"
    LAPLACE = "laplace"

    @classmethod
    def parse(cls, value: "BaseDistribution | str") -> "BaseDistribution":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise DomainError(f"unknown base distribution {value!r}") from None

    # -- moments ---------------------------------------------------------
    @property
    def variance(self) -> float:
        """Second moment of the centred density."""
        return 1.0 if self is BaseDistribution.GAUSSIAN else 2.0

    @property
    def fourth_moment(self) -> float:
        """Fourth moment of the centred density (3 for N(0,1), 4! for Laplace)."""
        return 3.0 if self is BaseDistribution.GAUSSIAN else 24.0

    # -- density and tails -----------------------------------------------
    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        if self is BaseDistribution.GAUSSIAN:
            out = _INV_SQRT_2PI * np.exp(-0.5 * x * x)
        else:
            out = 0.5 * np.exp(-np.abs(x))
        return out[()] if out.ndim == 0 else out

    def survival(self, x):
        """P(Z > x)."""
        x = np.asarray(x, dtype=float)
        if self is BaseDistribution.GAUSSIAN:
            # erfc keeps full relative precision in the upper tail
            out = 0.5 * erfc(x / _SQRT2)
        else:
            half = 0.5 * np.exp(-np.abs(x))
            out = np.where(x >= 0, half, 1.0 - half)
        return out[()] if out.ndim == 0 else out

    def cdf(self, x):
        """P(Z <= x), computed as the survival at -x (the density is even)."""
        return self.survival(-np.asarray(x, dtype=float))

    def inverse_survival(self, p):
        """The x with ``survival(x) == p`` for ``p`` in (0, 1)."""
        p = np.asarray(p, dtype=float)
        if np.any(~((p > 0.0) & (p < 1.0))):
            raise DomainError("inverse_survival needs 0 < p < 1")
        if self is BaseDistribution.LAPLACE:
            out = np.where(p <= 0.5, -np.log(2.0 * p), np.log(2.0 * (1.0 - p)))
        else:
            out = _bisect_survival(self, p)
        return out[()] if out.ndim == 0 else out

    # -- sampling ----------------------------------------------------------
    def draw(self, rng: np.random.Generator, shape) -> np.ndarray:
        """Standardised draws (location 0) of the given shape."""
        if self is BaseDistribution.GAUSSIAN:
            return rng.standard_normal(shape)
        return rng.laplace(0.0, 1.0, shape)


GAUSSIAN = BaseDistribution.GAUSSIAN
LAPLACE = BaseDistribution.LAPLACE


def _bisect_survival(d: BaseDistribution, p: np.ndarray) -> np.ndarray:
    lo = np.full(p.shape, -_BRACKET)
    hi = np.full(p.shape, _BRACKET)
    while True:
        width = hi - lo
        if np.all(width <= _XTOL):
            break
        mid = lo + 0.5 * width
        above = d.survival(mid) > p
        # survival is decreasing: too much mass above mid means root is right of mid
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
    return lo + 0.5 * (hi - lo)


@dataclass(frozen=True)
class MixtureParams:
    """Alternative density ``(1 - epsilon) phi(x - mu1) + epsilon phi(x - mu2)``."""

    epsilon: float
    mu1: float
    mu2: float
    base: BaseDistribution = GAUSSIAN

    def __post_init__(self):
        object.__setattr__(self, "base", BaseDistribution.parse(self.base))
        if not 0.0 < self.epsilon < 1.0:
            raise DomainError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if not (math.isfinite(self.mu1) and math.isfinite(self.mu2)):
            raise DomainError("component means must be finite")
        if not self.mu1 < self.mu2:
            raise DomainError(f"need mu1 < mu2, got mu1={self.mu1}, mu2={self.mu2}")

    @property
    def separation(self) -> float:
        return self.mu2 - self.mu1

    @property
    def mean(self) -> float:
        return (1.0 - self.epsilon) * self.mu1 + self.epsilon * self.mu2

    @property
    def variance(self) -> float:
        eps = self.epsilon
        return self.base.variance + eps * (1.0 - eps) * self.separation**2

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        eps = self.epsilon
        return (1.0 - eps) * self.base.pdf(x - self.mu1) + eps * self.base.pdf(x - self.mu2)


def as_sample(values) -> np.ndarray:
    """Validate an observation vector and return it as a 1-D float array."""
    x = np.asarray(values, dtype=float)
    if x.ndim != 1:
        raise DomainError("a sample must be one-dimensional")
    if x.size < 1:
        raise DomainError("a sample needs at least one observation")
    if not np.all(np.isfinite(x)):
        raise DomainError("sample contains non-finite values")
    return x


def draw_pure(base: BaseDistribution, mu: float, shape, rng: np.random.Generator) -> np.ndarray:
    return base.draw(rng, shape) + mu


def draw_mixture(params: MixtureParams, shape, rng: np.random.Generator) -> np.ndarray:
    # labels first, then noise: the draw order is part of the reproducibility contract
    from_second = rng.random(shape) < params.epsilon
    noise = params.base.draw(rng, shape)
    return noise + np.where(from_second, params.mu2, params.mu1)


def sample_pure(base, mu: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` independent draws from ``phi(x - mu)``."""
    if n < 1:
        raise DomainError(f"sample size must be >= 1, got {n}")
    return draw_pure(BaseDistribution.parse(base), mu, n, rng)


def sample_mixture(params: MixtureParams, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` independent draws from the two-component mixture."""
    if n < 1:
        raise DomainError(f"sample size must be >= 1, got {n}")
    return draw_mixture(params, n, rng)
