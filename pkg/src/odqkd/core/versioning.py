"""
Schema version metadata for the record stream, sweep CSV and statistics artifacts.

Exposes the canonical schema version (SCHEMA_V) embedded in every artifact header and
provides compatibility checks used by readers. This module is zero-IO.

Notes:
    - The CSV header comment `#schema=<major>` carries only the major component.
    - Readers refuse streams whose major/minor differ from SCHEMA_V.
"""

from dataclasses import dataclass
from datetime import date

SCHEMA_MAJOR_VERSION = 1
SCHEMA_MINOR_VERSION = 0


@dataclass(frozen=True)
class SchemaVersion:
    """
    Immutable semantic version with ISO release date for artifacts.

    Attributes:
        major (int): Non-negative major component signalling breaking changes.
        minor (int): Non-negative minor component for additive, non-breaking changes.
        date (str): ISO YYYY-MM-DD release date.

    Raises:
        ValueError: If any component is negative or the date is not ISO compliant.
    """

    major: int
    minor: int
    date: str  # ISO YYYY-MM-DD

    def __post_init__(self) -> None:
        for name in ("major", "minor"):
            value = getattr(self, name)
            if value < 0:
                raise ValueError(f"SchemaVersion {name} must be non-negative, got {value}")
        try:
            date.fromisoformat(self.date)
        except ValueError as exc:
            raise ValueError(
                f"SchemaVersion date must be ISO YYYY-MM-DD, got {self.date!r}"
            ) from exc

    @property
    def tag(self) -> str:
        """Short `<major>.<minor>` form written into artifact headers."""
        return f"{self.major}.{self.minor}"

    @classmethod
    def parse_tag(cls, tag: str, *, release: str = "1970-01-01") -> "SchemaVersion":
        """Parse a `<major>.<minor>` header tag (the release date is not carried in headers)."""
        major_s, _, minor_s = tag.partition(".")
        try:
            return cls(int(major_s), int(minor_s or 0), release)
        except ValueError as exc:
            raise ValueError(f"invalid schema tag {tag!r}") from exc


SCHEMA_V = SchemaVersion(SCHEMA_MAJOR_VERSION, SCHEMA_MINOR_VERSION, "2026-10-01")
SCHEMA_COMPAT_MAJOR = SCHEMA_V.major
SCHEMA_COMPAT_MINOR = SCHEMA_V.minor


def is_compatible(ver: SchemaVersion) -> bool:
    """
    Check whether a version matches the supported schema contract.

    Args:
        ver (SchemaVersion): Version read from an artifact header.

    Returns:
        bool: True if ver shares both the major and minor numbers with SCHEMA_V.

    Examples:
        >>> from odqkd.core.versioning import SCHEMA_V, is_compatible
        >>> is_compatible(SCHEMA_V)
        True
    """
    return ver.major == SCHEMA_COMPAT_MAJOR and ver.minor == SCHEMA_COMPAT_MINOR
