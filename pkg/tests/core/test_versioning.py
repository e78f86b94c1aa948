"""Tests for `odqkd.core.versioning` schema version helpers."""

import pytest

from odqkd.core.versioning import (
    SCHEMA_COMPAT_MAJOR,
    SCHEMA_COMPAT_MINOR,
    SCHEMA_V,
    SchemaVersion,
    is_compatible,
)


def test_current_tag() -> None:
    assert SCHEMA_V.tag == f"{SCHEMA_COMPAT_MAJOR}.{SCHEMA_COMPAT_MINOR}"
    assert SCHEMA_V.tag == "1.0"


@pytest.mark.parametrize("bad_date", ["2025/09/20", "2025-9-2", "20-09-2025"])
def test_schema_version_rejects_non_iso_date(bad_date: str) -> None:
    with pytest.raises(ValueError, match="SchemaVersion date must be ISO"):
        SchemaVersion(major=SCHEMA_COMPAT_MAJOR, minor=0, date=bad_date)


@pytest.mark.parametrize("field,value", [("major", -1), ("minor", -1)])
def test_schema_version_rejects_negative_components(field: str, value: int) -> None:
    kwargs = {"major": SCHEMA_COMPAT_MAJOR, "minor": SCHEMA_COMPAT_MINOR, "date": "2025-09-20"}
    kwargs[field] = value

    with pytest.raises(ValueError, match=f"SchemaVersion {field} must be non-negative"):
        SchemaVersion(**kwargs)  # type: ignore[arg-type]


@pytest.mark.parametrize(
    "tag,expected",
    [("1.0", (1, 0)), ("2.3", (2, 3)), ("4", (4, 0))],
)
def test_parse_tag(tag: str, expected: tuple[int, int]) -> None:
    v = SchemaVersion.parse_tag(tag)
    assert (v.major, v.minor) == expected


@pytest.mark.parametrize("tag", ["", "x.1", "1.y", "-1.0"])
def test_parse_tag_rejects_garbage(tag: str) -> None:
    with pytest.raises(ValueError):
        SchemaVersion.parse_tag(tag)


def test_is_compatible_checks_both_components() -> None:
    compatible = SchemaVersion.parse_tag(SCHEMA_V.tag)
    wrong_major = SchemaVersion(SCHEMA_COMPAT_MAJOR + 1, SCHEMA_COMPAT_MINOR, "2025-09-20")
    wrong_minor = SchemaVersion(SCHEMA_COMPAT_MAJOR, SCHEMA_COMPAT_MINOR + 1, "2025-09-20")

    assert is_compatible(compatible) is True
    assert is_compatible(wrong_major) is False
    assert is_compatible(wrong_minor) is False
