"""
Core exception types raised by state constructors, protocol contracts, and rate formulas.

Provides typed exceptions for core-domain failures:
- ParameterError for out-of-range scalar parameters and malformed arguments.
- DimensionError for qubit-count and matrix-shape mismatches.
- CapacityError for compositions beyond the dense backend's size limit.
- ContractViolation for protocol preconditions (e.g., a Z-basis auxiliary symbol).
- RecordValidationError for malformed round transcripts.
- UndefinedRateError when an error-rate formula divides by a zero yield.
- VersionMismatch for artifact schema versions incompatible with SCHEMA_V.

Notes:
    - This module uses only the Python standard library and has no side effects.
    - IO-layer failures (files, configuration) live in odqkd.io.errors.

Examples:
    Catch a parameter failure.

    >>> from odqkd.core.errors import ParameterError
    >>> def check_weight(p: float) -> float:
    ...     if not 0.0 <= p <= 1.0:
    ...         raise ParameterError("p must lie in [0, 1]")
    ...     return p
    >>> try:
    ...     check_weight(1.5)
    ... except ParameterError as e:
    ...     msg = str(e)
    >>> "[0, 1]" in msg
    True
"""

from __future__ import annotations

__all__ = [
    "ParameterError",
    "DimensionError",
    "CapacityError",
    "ContractViolation",
    "RecordValidationError",
    "UndefinedRateError",
    "VersionMismatch",
]


class ParameterError(ValueError):
    """Scalar parameter outside its allowed range, or an ill-formed argument."""


class DimensionError(ParameterError):
    """Qubit count or matrix shape does not match what the operation requires (a ParameterError)."""


class CapacityError(DimensionError):
    """Requested composition exceeds the dense backend's qubit limit."""


class ContractViolation(ValueError):
    """Protocol-level precondition broken (e.g., Failure passed where a success is required)."""


class RecordValidationError(ValueError):
    """Round transcript is malformed (indices, lengths, announcement alphabet)."""


class UndefinedRateError(ArithmeticError):
    """Error-rate formula is undefined because the single-photon yield is zero."""


class VersionMismatch(RuntimeError):
    """Incompatible or unexpected artifact schema version encountered."""
