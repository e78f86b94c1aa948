"""
Artifact writers and readers: sweep reports, record streams and session statistics.

Overview
- Sweep reports are written as schema-tagged CSV or canonical JSON.
- Round records stream to NDJSON: a header object, then one canonical JSON record per line.
- Session statistics are written as canonical JSON or as a flat polars table (CSV).
- Every write goes through odqkd.io.fs (tmp → fsync → os.replace).

Source of truth
- Schema version: odqkd.core.versioning.SCHEMA_V (header "schema" field, CSV tag line).
- Canonical JSON policy: odqkd.core.hashing.json_dumps_canonical.

Notes
- Readers refuse artifacts whose schema differs from SCHEMA_V with VersionMismatch; missing or
  foreign files raise IoReadError.
"""

from __future__ import annotations

import logging
import os
from collections.abc import Iterable, Iterator, Mapping
from pathlib import Path
from typing import Any

import polars as pl
from pydantic import ValidationError

from odqkd.core.constants import CSV_SCHEMA_TAG
from odqkd.core.errors import VersionMismatch
from odqkd.core.hashing import json_dumps_canonical
from odqkd.core.serde import json_object, ndjson_line
from odqkd.core.versioning import SCHEMA_V, SchemaVersion, is_compatible
from odqkd.keyrate.sweep import SweepReport
from odqkd.netsim.stats import Estimate, SessionStats
from odqkd.protocol.records import RoundRecord

from .config import OutputFormat
from .errors import IoReadError
from .fs import read_text, write_lines_atomic, write_text_atomic

__all__ = [
    "RECORDS_KIND",
    "STATS_KIND",
    "write_sweep",
    "read_sweep_csv",
    "write_records",
    "read_records",
    "stats_document",
    "stats_frame",
    "write_stats",
]

logger = logging.getLogger(__name__)

RECORDS_KIND = "round_records"
STATS_KIND = "session_stats"


def _check_schema(tag: Any, source: str) -> None:
    if not isinstance(tag, str):
        raise IoReadError(f"{source}: header has no schema tag")
    try:
        version = SchemaVersion.parse_tag(tag)
    except ValueError as exc:
        raise IoReadError(f"{source}: {exc}") from exc
    if not is_compatible(version):
        raise VersionMismatch(f"{source}: schema {tag} is not supported (expected {SCHEMA_V.tag})")


# ---------------------------------------------------------------------------------------------
# Sweep reports
# ---------------------------------------------------------------------------------------------


def write_sweep(report: SweepReport, path: str | os.PathLike[str], fmt: OutputFormat) -> Path:
    """
    Write a sweep report as schema-tagged CSV or canonical JSON.

    Raises:
        IoWriteError: If the atomic write fails.
    """
    text = report.to_csv() if fmt == "csv" else report.to_json() + "\n"
    out = write_text_atomic(path, text)
    logger.info("sweep: wrote %d points to %s", len(report.points), out)
    return out


def read_sweep_csv(path: str | os.PathLike[str]) -> pl.DataFrame:
    """
    Read a sweep CSV written by write_sweep.

    Raises:
        IoReadError: If the file is missing.
        VersionMismatch: If the first line is not the current schema tag.
    """
    text = read_text(path)
    first, _, body = text.partition("\n")
    if first != CSV_SCHEMA_TAG:
        raise VersionMismatch(f"{path}: expected {CSV_SCHEMA_TAG!r}, found {first!r}")
    return pl.read_csv(body.encode("utf-8"))


# ---------------------------------------------------------------------------------------------
# Record streams
# ---------------------------------------------------------------------------------------------


def _record_lines(records: Iterable[RoundRecord], meta: Mapping[str, Any]) -> Iterator[bytes]:
    header = {**meta, "schema": SCHEMA_V.tag, "kind": RECORDS_KIND}
    yield ndjson_line(header)
    for rec in records:
        yield ndjson_line(rec.model_dump(mode="json"))


def write_records(
    records: Iterable[RoundRecord],
    path: str | os.PathLike[str],
    *,
    meta: Mapping[str, Any] | None = None,
) -> Path:
    """
    Stream records to NDJSON behind a schema header.

    Args:
        records (Iterable[RoundRecord]): Records in the order they should be read back.
        path (str | os.PathLike[str]): Destination.
        meta (Mapping[str, Any] | None): Extra header fields (seed, topology, ...).

    Returns:
        Path: The written file.

    Examples:
        >>> import tempfile, pathlib
        >>> rec = RoundRecord.from_round(0, ["H", "V"], ["psi+", "psi-"], (0, 1))
        >>> p = pathlib.Path(tempfile.mkdtemp()) / "r.ndjson"
        >>> _ = write_records([rec], p, meta={"seed": 1})
        >>> p.read_text().splitlines()[0]
        '{"kind":"round_records","schema":"1.0","seed":1}'
    """
    return write_lines_atomic(path, _record_lines(records, meta or {}))


def read_records(path: str | os.PathLike[str]) -> tuple[dict[str, Any], list[RoundRecord]]:
    """
    Read an NDJSON record stream.

    Returns:
        tuple[dict[str, Any], list[RoundRecord]]: The header object and the records.

    Raises:
        IoReadError: If the file is missing, empty, not a record stream or has a bad line.
        VersionMismatch: If the header schema differs from SCHEMA_V.
    """
    lines = read_text(path).splitlines()
    if not lines:
        raise IoReadError(f"{path}: empty record stream")
    try:
        header = json_object(lines[0])
    except ValueError as exc:
        raise IoReadError(f"{path}: header is not a JSON object") from exc
    if header.get("kind") != RECORDS_KIND:
        raise IoReadError(f"{path}: not a round record stream")
    _check_schema(header.get("schema"), str(path))
    records = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            records.append(RoundRecord.model_validate_json(line))
        except ValidationError as exc:
            raise IoReadError(f"{path}:{lineno}: invalid record: {exc}") from exc
    logger.debug("read %d records from %s", len(records), path)
    return header, records


# ---------------------------------------------------------------------------------------------
# Session statistics
# ---------------------------------------------------------------------------------------------


def stats_document(stats: SessionStats, **extra: Any) -> dict[str, Any]:
    """Header fields, extra context and the dumped statistics as one mapping."""
    body = stats.model_dump(mode="json")
    return {**extra, "schema": SCHEMA_V.tag, "kind": STATS_KIND, "stats": body}


def _estimates(stats: SessionStats) -> Iterator[tuple[str, Estimate]]:
    for name in ("gain_zz", "gain_xx", "heralded_gain_zz", "heralded_gain_xx", "qber_z"):
        yield name, getattr(stats, name)
    yield "qber_x", stats.qber_x
    if stats.conference is not None:
        yield "conference_error_12", stats.conference.error_12
        yield "conference_error_13", stats.conference.error_13


def stats_frame(stats: SessionStats) -> pl.DataFrame:
    """
    One row per estimate: metric, successes, trials, value, stderr, ci_low, ci_high.

    Rates are appended as rows with only `value` filled.
    """
    rows: list[dict[str, Any]] = [
        {"metric": name, **est.model_dump()} for name, est in _estimates(stats)
    ]
    rates = {"key_rate": stats.key_rate}
    if stats.conference is not None:
        rates["conference_rate"] = stats.conference.rate
    for name, value in rates.items():
        rows.append(
            {
                "metric": name,
                "successes": None,
                "trials": None,
                "value": value,
                "stderr": None,
                "ci_low": None,
                "ci_high": None,
            }
        )
    schema = {
        "metric": pl.String,
        "successes": pl.Int64,
        "trials": pl.Int64,
        "value": pl.Float64,
        "stderr": pl.Float64,
        "ci_low": pl.Float64,
        "ci_high": pl.Float64,
    }
    return pl.DataFrame(rows, schema=schema)


def write_stats(
    stats: SessionStats, path: str | os.PathLike[str], fmt: OutputFormat, **extra: Any
) -> Path:
    """
    Write session statistics as canonical JSON (with `extra` context) or as a metrics CSV.

    Raises:
        IoWriteError: If the atomic write fails.
    """
    if fmt == "json":
        text = json_dumps_canonical(stats_document(stats, **extra)) + "\n"
    else:
        text = f"{CSV_SCHEMA_TAG}\n{stats_frame(stats).write_csv()}"
    out = write_text_atomic(path, text)
    logger.info("stats: wrote %s", out)
    return out
