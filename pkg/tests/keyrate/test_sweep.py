"""Tests for `odqkd.keyrate.sweep`: grids, cutoffs and serialized forms."""

from __future__ import annotations

import json

import polars as pl
import pytest

from odqkd.core.constants import CSV_SCHEMA_TAG
from odqkd.core.errors import ParameterError
from odqkd.detector.model import DetectorParams, equivalent_detector
from odqkd.keyrate.formulas import link_budget, realistic_rate_unclamped
from odqkd.keyrate.sweep import CSV_COLUMNS, SweepReport, cutoff_distance, sweep

PARAMS = DetectorParams()
DISTANCES = [float(d) for d in range(0, 701, 10)]


@pytest.fixture(scope="module")
def report() -> SweepReport:
    return sweep([1.0, 0.98, 0.96], DISTANCES, PARAMS)


def test_grid_order_and_size(report: SweepReport) -> None:
    assert len(report.points) == 3 * len(DISTANCES)
    assert [pt.p for pt in report.points[:2]] == [1.0, 1.0]
    assert report.points[len(DISTANCES)].p == 0.98
    assert [c.p for c in report.cutoffs] == [1.0, 0.98, 0.96]


def test_cutoff_beyond_500_km_for_pure_source(report: SweepReport) -> None:
    cut = report.cutoff_for(1.0)
    assert cut is not None and 500.0 <= cut <= 700.0


def test_cutoff_shrinks_with_p(report: SweepReport) -> None:
    cuts = [report.cutoff_for(p) for p in (1.0, 0.98, 0.96)]
    assert all(c is not None for c in cuts)
    assert cuts[0] > cuts[1] > cuts[2]  # type: ignore[operator]


def test_rate_nonincreasing_and_zero_past_cutoff(report: SweepReport) -> None:
    for p in (1.0, 0.98, 0.96):
        row = [pt for pt in report.points if pt.p == p]
        rates = [pt.rate for pt in row]
        assert all(b <= a for a, b in zip(rates, rates[1:], strict=False))
        cut = report.cutoff_for(p)
        assert cut is not None
        assert all(pt.rate == 0.0 for pt in row if pt.distance_km > cut + 0.1)
        assert all(pt.rate > 0.0 for pt in row if pt.distance_km < cut - 0.1)


def test_cutoff_resolution() -> None:
    cut = cutoff_distance(1.0, PARAMS)
    assert cut is not None
    eq = equivalent_detector(PARAMS)
    before = realistic_rate_unclamped(1.0, link_budget(cut - 0.2, 0.2), eq, PARAMS)[0]
    after = realistic_rate_unclamped(1.0, link_budget(cut + 0.2, 0.2), eq, PARAMS)[0]
    assert before > 0 > after


def test_midpoint_relays_extend_reach() -> None:
    plain = cutoff_distance(1.0, PARAMS)
    mid = cutoff_distance(1.0, PARAMS, relay_at_midpoint=True)
    assert plain is not None and mid is not None
    assert mid == pytest.approx(2 * plain, abs=0.5)


def test_cutoff_edge_cases() -> None:
    assert cutoff_distance(0.0, PARAMS) == 0.0
    dark_free = DetectorParams(p_d=0.0)
    assert cutoff_distance(1.0, dark_free, max_distance_km=1000.0) is None


def test_sweep_past_detector_reach() -> None:
    params = DetectorParams(p_d=0.0, alpha=1.0)

    rep = sweep([1.0], [0.0, 2000.0, 4000.0], params)

    _, reachable, unreachable = rep.points
    assert reachable.rate > 0.0 and not reachable.clamped
    assert unreachable.rate == 0.0 and unreachable.clamped
    assert unreachable.qber_zz == 0.5
    cut = rep.cutoff_for(1.0)
    assert cut is not None and 2000.0 < cut < 4000.0


def test_sweep_with_blind_detectors() -> None:
    blind = DetectorParams(eta_d=0.0, p_d=0.0)

    rep = sweep([1.0], [0.0, 10.0], blind)

    assert all(pt.rate == 0.0 and pt.clamped for pt in rep.points)
    assert rep.cutoff_for(1.0) == 0.0


def test_empty_grid_rejected() -> None:
    with pytest.raises(ParameterError):
        sweep([], [0.0], PARAMS)
    with pytest.raises(ParameterError):
        sweep([1.0], [], PARAMS)


def test_frame_and_csv(report: SweepReport) -> None:
    frame = report.to_frame()
    assert isinstance(frame, pl.DataFrame)
    assert frame.columns == [*CSV_COLUMNS, "clamped"]
    lines = report.to_csv().splitlines()
    assert lines[0] == CSV_SCHEMA_TAG
    assert lines[1] == "p,distance_km,gain_zz,qber_zz,phase_error_xx,rate"
    assert len(lines) == 2 + len(report.points)


def test_json_form(report: SweepReport) -> None:
    payload = json.loads(report.to_json())
    assert payload["kind"] == "sweep"
    assert payload["schema"].startswith("1.0")
    assert len(payload["points"]) == len(report.points)
    assert payload["cutoffs"][0]["p"] == 1.0
    assert SweepReport.model_validate(
        {k: v for k, v in payload.items() if k not in ("schema", "kind")}
    ) == report
