"""
JSON helpers for the line-oriented artifacts (record streams, statistics).

`ndjson_line` encodes one canonical JSON object per line; `json_object` parses a line back
and insists on a JSON object, which is all the record stream ever carries. Canonical
encoding is delegated to odqkd.core.hashing so hashes and files agree byte for byte.
This module is zero-IO.
"""

from __future__ import annotations

import json
from collections.abc import Mapping
from typing import Any

from .hashing import json_dumps_canonical

__all__ = [
    "json_loads",
    "json_object",
    "ndjson_line",
    "json_dumps_canonical",
]


def json_loads(s: str) -> Any:
    return json.loads(s)


def json_object(s: str) -> dict[str, Any]:
    """
    Parse one JSON object.

    Raises:
        ValueError: If `s` is not JSON or decodes to anything other than an object.

    Examples:
        >>> json_object('{"kind":"round_records"}')
        {'kind': 'round_records'}
    """
    value = json_loads(s)
    if not isinstance(value, dict):
        raise ValueError(f"expected a JSON object, got {type(value).__name__}")
    return value


def ndjson_line(obj: Mapping[str, Any]) -> bytes:
    """Canonical JSON for `obj` plus a trailing newline, UTF-8 encoded."""
    return (json_dumps_canonical(obj) + "\n").encode("utf-8")
