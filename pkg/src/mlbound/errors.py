"""Exception hierarchy shared across the package."""

from __future__ import annotations


class MlboundError(Exception):
    """Base class for all package errors."""


class DomainError(MlboundError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class InputError(MlboundError, ValueError):
    """A structured input (matrix, spectrum, codebook) violates its contract."""


class SizeError(MlboundError, ValueError):
    """An input is too large for exhaustive processing."""


class OptimizationError(MlboundError, RuntimeError):
    """A scalar optimization could not be carried out (e.g. no finite values)."""


class NoRootError(MlboundError, RuntimeError):
    """Bracketing failed: the target function has no sign change on the search range."""


class EvaluationError(MlboundError, RuntimeError):
    """A numerical evaluation produced a non-finite intermediate."""


class RatioError(MlboundError, ValueError):
    """A spectrum ratio against a reference with a vanishing denominator."""


class ConfigError(MlboundError, ValueError):
    """A CLI configuration file is malformed or inconsistent."""
