"""Tests for `odqkd.io.write` and `odqkd.io.fs`: atomic artifacts and schema-checked readers."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from odqkd.core.constants import CSV_SCHEMA_TAG
from odqkd.core.errors import VersionMismatch
from odqkd.detector.model import DetectorParams
from odqkd.io import fs
from odqkd.io.errors import IoReadError, IoWriteError
from odqkd.io.write import (
    read_records,
    read_sweep_csv,
    stats_frame,
    write_records,
    write_stats,
    write_sweep,
)
from odqkd.keyrate.sweep import CSV_COLUMNS, sweep
from odqkd.netsim.session import SessionConfig, run_session
from odqkd.netsim.topology import Topology


@pytest.fixture(scope="module")
def session():  # type: ignore[no-untyped-def]
    topo = Topology.star(3, (0, 2), params=DetectorParams(eta_d=1.0, p_d=0.0, e_d=0.0))
    return run_session(topo, SessionConfig(rounds=300, seed=17, aux_uniform=True))


def test_atomic_write_replaces_and_cleans_up(tmp_path: Path) -> None:
    target = tmp_path / "nested" / "a.txt"
    fs.write_text_atomic(target, "one")
    fs.write_text_atomic(target, "two")
    assert target.read_text() == "two"
    assert [p.name for p in target.parent.iterdir()] == ["a.txt"]


def test_failed_write_raises_and_leaves_no_tmp(tmp_path: Path) -> None:
    def chunks():  # type: ignore[no-untyped-def]
        yield b"partial"
        raise OSError("disk full")

    target = tmp_path / "b.txt"
    with pytest.raises(IoWriteError):
        fs.write_lines_atomic(target, chunks())
    assert list(tmp_path.iterdir()) == []


def test_unwritable_destination(tmp_path: Path) -> None:
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(IoWriteError):
        fs.write_text_atomic(blocker / "out.csv", "data")


def test_sweep_csv_is_tagged_and_stable(tmp_path: Path) -> None:
    report = sweep([1.0, 0.97], [0.0, 100.0, 200.0], DetectorParams())
    a = write_sweep(report, tmp_path / "a.csv", "csv")
    b = write_sweep(report, tmp_path / "b.csv", "csv")
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == CSV_SCHEMA_TAG
    assert lines[1] == ",".join(CSV_COLUMNS)
    assert len(lines) == 2 + 6
    frame = read_sweep_csv(a)
    assert frame.columns == list(CSV_COLUMNS)
    assert frame.height == 6


def test_sweep_json(tmp_path: Path) -> None:
    report = sweep([1.0], [0.0], DetectorParams())
    doc = json.loads(write_sweep(report, tmp_path / "s.json", "json").read_text())
    assert doc["kind"] == "sweep"
    assert doc["schema"] == "1.0"
    assert len(doc["points"]) == 1


def test_sweep_csv_with_foreign_tag(tmp_path: Path) -> None:
    path = tmp_path / "old.csv"
    path.write_text("#schema=0\np,distance_km\n1.0,0.0\n")
    with pytest.raises(VersionMismatch):
        read_sweep_csv(path)


def test_record_stream_round_trip(tmp_path: Path, session) -> None:  # type: ignore[no-untyped-def]
    path = write_records(session.records, tmp_path / "r.ndjson", meta={"seed": 17})
    header, records = read_records(path)
    assert header == {"kind": "round_records", "schema": "1.0", "seed": 17}
    assert tuple(records) == session.records
    first = json.loads(path.read_text().splitlines()[1])
    assert set(first["bsm"]) <= {"psi+", "psi-", "fail"}
    assert set(first["preparations"]) <= {"H", "V", "D", "A"}


@pytest.mark.parametrize(
    "content,error",
    [
        ("", IoReadError),
        ("not json\n", IoReadError),
        ('{"kind":"sweep","schema":"1.0"}\n', IoReadError),
        ('{"kind":"round_records"}\n', IoReadError),
        ('{"kind":"round_records","schema":"2.0"}\n', VersionMismatch),
        ('{"kind":"round_records","schema":"1.0"}\n{"round_id":-1}\n', IoReadError),
    ],
)
def test_bad_record_streams(tmp_path: Path, content: str, error: type[Exception]) -> None:
    path = tmp_path / "bad.ndjson"
    path.write_text(content)
    with pytest.raises(error):
        read_records(path)


def test_missing_record_stream(tmp_path: Path) -> None:
    with pytest.raises(IoReadError):
        read_records(tmp_path / "absent.ndjson")


def test_stats_artifacts(tmp_path: Path, session) -> None:  # type: ignore[no-untyped-def]
    a = write_stats(session.stats, tmp_path / "a.json", "json", seed=17)
    b = write_stats(session.stats, tmp_path / "b.json", "json", seed=17)
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert doc["kind"] == "session_stats"
    assert doc["seed"] == 17
    assert doc["stats"]["rounds"] == 300

    frame = stats_frame(session.stats)
    assert frame["metric"].to_list()[-1] == "key_rate"
    assert "qber_z" in frame["metric"].to_list()
    csv = write_stats(session.stats, tmp_path / "s.csv", "csv").read_text().splitlines()
    assert csv[0] == CSV_SCHEMA_TAG
    assert csv[1] == "metric,successes,trials,value,stderr,ci_low,ci_high"
