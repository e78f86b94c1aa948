"""
Canonical JSON serialization and hashing helpers for artifacts.

Provides a single canonical JSON policy and SHA-256 helpers so that statistics, sweep reports
and record streams serialize identically across runs, worker counts and machines. This module
is zero-IO and uses only the Python standard library.

Notes:
    - Canonical JSON:
        - sort_keys=True
        - separators=(",", ":")
        - ensure_ascii=False
        - allow_nan=False (NaN/inf are not valid artifact values; encode them as null upstream)
    - Hashing is performed over the UTF-8 encoded canonical JSON string.
    - The determinism tests compare digests rather than whole files.
"""

from __future__ import annotations

import hashlib
import json
from collections.abc import Mapping
from typing import Any

__all__ = [
    "json_dumps_canonical",
    "digest_text",
    "digest_bytes",
    "hash_mapping",
]


def json_dumps_canonical(obj: Any) -> str:
    """
    Serialize an object to a canonical JSON string.

    Args:
        obj (Any): JSON-serializable object.

    Returns:
        str: Canonical JSON string with sort_keys=True, compact separators,
        and ensure_ascii=False.

    Raises:
        ValueError: If obj contains NaN or infinite floats.
    """
    return json.dumps(
        obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False, allow_nan=False
    )


def digest_text(s: str) -> str:
    """Compute the SHA-256 hex digest of a UTF-8 string."""
    return digest_bytes(s.encode("utf-8"))


def digest_bytes(data: bytes) -> str:
    """Compute the SHA-256 hex digest of raw bytes (e.g., a written artifact)."""
    h = hashlib.sha256()
    h.update(data)
    return h.hexdigest()


def hash_mapping(row: Mapping[str, Any]) -> str:
    """
    Compute a stable hash for a mapping by hashing its canonical JSON.

    Args:
        row (Mapping[str, Any]): Mapping (e.g., a dumped SessionStats) to hash.

    Returns:
        str: SHA-256 hex digest over the canonical JSON serialization.

    Examples:
        >>> from odqkd.core.hashing import hash_mapping
        >>> hash_mapping({"a": 1, "b": 2}) == hash_mapping({"b": 2, "a": 1})
        True
    """
    return digest_text(json_dumps_canonical(dict(row)))
