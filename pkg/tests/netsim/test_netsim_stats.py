"""Tests for `odqkd.netsim.stats` estimators and the analytic comparison."""

from __future__ import annotations

import pytest

from odqkd.core.alphabet import Bb84Symbol as S
from odqkd.core.alphabet import BsmOutcome as B
from odqkd.core.errors import ParameterError
from odqkd.detector.model import DetectorParams
from odqkd.netsim.session import SessionConfig, run_session
from odqkd.netsim.stats import (
    Estimate,
    MetricDelta,
    compare_with_analytic,
    estimate_statistics,
    is_heralded,
)
from odqkd.netsim.topology import Topology
from odqkd.protocol.records import RoundRecord
from odqkd.protocol.sifting import sift_round


def test_estimate_from_counts() -> None:
    est = Estimate.from_counts(10, 40)
    assert est.value == 0.25
    assert est.ci_low is not None and est.ci_high is not None
    assert est.ci_low < 0.25 < est.ci_high
    zero = Estimate.from_counts(0, 50)
    assert zero.value == 0.0
    assert zero.stderr == 0.0
    assert zero.ci_high is not None and zero.ci_high > 0.0


@pytest.mark.parametrize("k,n", [(-1, 3), (4, 3), (0, -1)])
def test_estimate_rejects_bad_counts(k: int, n: int) -> None:
    with pytest.raises(ParameterError):
        Estimate.from_counts(k, n)


def test_heralding() -> None:
    ok = RoundRecord.from_round(0, [S.ZERO, S.ONE, S.PLUS], [B.PSI_PLUS] * 3, (0, 1))
    z_aux = RoundRecord.from_round(1, [S.ZERO, S.ONE, S.ZERO], [B.PSI_PLUS] * 3, (0, 1))
    failed = RoundRecord.from_round(
        2, [S.ZERO, S.ONE, S.PLUS], [B.PSI_PLUS, B.PSI_PLUS, B.FAILURE], (0, 1)
    )
    assert is_heralded(ok)
    assert not is_heralded(z_aux)
    assert not is_heralded(failed)


def test_statistics_contract_errors() -> None:
    a = RoundRecord.from_round(0, [S.ZERO, S.ONE], [B.PSI_PLUS] * 2, (0, 1))
    b = RoundRecord.from_round(1, [S.ZERO, S.ONE, S.PLUS], [B.PSI_PLUS] * 3, (0, 1))
    with pytest.raises(ParameterError):
        estimate_statistics([a], [])
    with pytest.raises(ParameterError):
        estimate_statistics([a], [sift_round(b)])
    with pytest.raises(ParameterError):
        estimate_statistics([a, b], [sift_round(a), sift_round(b)])


def test_empty_session_statistics() -> None:
    stats = estimate_statistics([], [])
    assert stats.rounds == 0
    assert stats.empty
    assert stats.key_rate is None


def test_metric_delta_threshold() -> None:
    inside = MetricDelta(name="x", simulated=0.1, analytic=0.1, stderr=0.01, sigma=2.9)
    outside = MetricDelta(name="x", simulated=0.2, analytic=0.1, stderr=0.01, sigma=10.0)
    exact = MetricDelta(name="x", simulated=0.0, analytic=0.0, stderr=0.0, sigma=None)
    missing = MetricDelta(name="x", simulated=None, analytic=0.0, stderr=None, sigma=None)
    assert inside.within and exact.within
    assert not outside.within and not missing.within


def test_comparison_preconditions() -> None:
    conf = Topology.star(3, (0, 1, 2))
    stats = run_session(conf, SessionConfig(rounds=5)).stats
    with pytest.raises(ParameterError):
        compare_with_analytic(stats, conf)
    uneven = Topology(2, (0, 1), ((1.0, 0.0), (2.0, 0.0)))
    with pytest.raises(ParameterError):
        compare_with_analytic(stats, uneven)


def test_simulation_tracks_the_closed_forms() -> None:
    params = DetectorParams(eta_d=0.9, p_d=1e-3, e_d=0.02)
    topo = Topology.star(2, (0, 1), distance_km=20.0, params=params, source_p=0.95)
    stats = run_session(topo, SessionConfig(rounds=20_000, seed=31)).stats
    cmp = compare_with_analytic(stats, topo)
    assert cmp.distance_km == 20.0
    assert [d.name for d in cmp.deltas] == ["heralded_gain_zz", "qber_z", "qber_x"]
    for d in cmp.deltas:
        assert d.sigma is not None and d.sigma < 4.0, d


@pytest.mark.slow
def test_default_hardware_gain_at_fifty_km() -> None:
    topo = Topology.star(2, (0, 1), distance_km=50.0)
    cfg = SessionConfig(rounds=1_000_000, seed=20240601, workers=4, chunk_size=50_000)
    stats = run_session(topo, cfg).stats
    gain = compare_with_analytic(stats, topo).deltas[0]
    assert gain.sigma is not None and gain.sigma <= 3.0
