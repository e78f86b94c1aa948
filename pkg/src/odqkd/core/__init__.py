"""
Core contracts shared by every odqkd layer (errors, typing, constants, hashing/serde, versioning).

## Contracts (single source of truth)
- Errors — typed exceptions for parameter, dimension, contract and rate failures.
- Typing — the parity-bit literal and the complex array alias.
- Constants — numerical tolerances, backend limits, experimental defaults.
- Hashing/Serde — canonical JSON and SHA-256 digests for artifacts.
- Versioning — schema version written into record streams and CSV headers.

## Notes
- Zero-IO policy: stdlib (plus numpy typing aliases) only.
- Imports nothing else from odqkd; every other subpackage may import from here.
"""

from .constants import (
    DEFAULT_ALPHA,
    DEFAULT_E_D,
    DEFAULT_ETA_D,
    DEFAULT_F,
    DEFAULT_P_D,
)
from .errors import (
    CapacityError,
    ContractViolation,
    DimensionError,
    ParameterError,
    RecordValidationError,
    UndefinedRateError,
    VersionMismatch,
)
from .hashing import digest_bytes, digest_text, hash_mapping, json_dumps_canonical
from .serde import json_loads
from .versioning import SCHEMA_V, SchemaVersion, is_compatible

__all__ = [
    "DEFAULT_ALPHA",
    "DEFAULT_E_D",
    "DEFAULT_ETA_D",
    "DEFAULT_F",
    "DEFAULT_P_D",
    "CapacityError",
    "ContractViolation",
    "DimensionError",
    "ParameterError",
    "RecordValidationError",
    "UndefinedRateError",
    "VersionMismatch",
    "digest_bytes",
    "digest_text",
    "hash_mapping",
    "json_dumps_canonical",
    "json_loads",
    "SCHEMA_V",
    "SchemaVersion",
    "is_compatible",
]
