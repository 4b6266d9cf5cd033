"""Exception types raised across the package."""


class MixDetectError(Exception):
    """Base class for all package errors."""


class DomainError(MixDetectError, ValueError):
    """An argument lies outside the domain of the operation."""


class CalibrationBudgetError(MixDetectError, ValueError):
    """Too few Monte Carlo replicates to estimate a usable quantile."""


class ContractError(MixDetectError, ValueError):
    """Inputs are individually valid but inconsistent with each other
    (for instance a sample whose size differs from the calibrated table)."""
