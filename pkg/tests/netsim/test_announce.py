"""Tests for `odqkd.netsim.announce`: broadcast ordering and sifting from the log alone."""

from __future__ import annotations

import pytest

from odqkd.core.alphabet import Basis
from odqkd.core.errors import ParameterError
from odqkd.detector.model import DetectorParams
from odqkd.netsim.announce import announce_phase, decisions_from_log, sift_from_log
from odqkd.netsim.session import SessionConfig, iter_rounds
from odqkd.netsim.topology import Topology
from odqkd.protocol.sifting import sift_round

PARAMS = DetectorParams(eta_d=0.9, p_d=1e-3, e_d=0.02)


@pytest.fixture(scope="module")
def records() -> list:  # type: ignore[type-arg]
    topo = Topology.star(4, (1, 3), distance_km=10.0, params=PARAMS, source_p=0.95)
    return list(iter_rounds(topo, SessionConfig(rounds=400, seed=21, aux_uniform=True)))


def test_empty_log() -> None:
    assert announce_phase([]) == []
    assert sift_from_log([], []) == []


def test_log_layout_per_round(records: list) -> None:  # type: ignore[type-arg]
    log = announce_phase(records)
    for rec in records[:50]:
        entries = [a for a in log if a.round_id == rec.round_id]
        n_aux_x = sum(p.basis is Basis.X for i, p in enumerate(rec.preparations) if i in (0, 2))
        assert len(entries) == 4 + 2 + n_aux_x
        kinds = [a.kind for a in entries]
        assert kinds[:4] == ["bsm"] * 4
        assert kinds[4:6] == ["basis", "basis"]
        assert [a.user for a in entries[4:6]] == [1, 3]
        assert all(k == "aux_symbol" for k in kinds[6:])
    assert [a.round_id for a in log] == sorted(a.round_id for a in log)


def test_log_order_ignores_input_order(records: list) -> None:  # type: ignore[type-arg]
    assert announce_phase(reversed(records[:20])) == announce_phase(records[:20])


def test_sifting_from_log_matches_record_sifting(records: list) -> None:  # type: ignore[type-arg]
    log = announce_phase(records)
    assert sift_from_log(log, records) == [sift_round(r) for r in records]


def test_sifting_from_log_flips_the_announced_user(records: list) -> None:  # type: ignore[type-arg]
    flipped = 0
    for rec, res in zip(records, sift_from_log(announce_phase(records), records), strict=True):
        if not res.kept:
            continue
        assert res.bit_pair is not None
        for u, bit in zip(rec.comm_users, res.bit_pair, strict=True):
            assert bit == rec.preparations[u].bit ^ (u == res.flip_user)
        flipped += res.flip_user is not None
    assert flipped > 0


def test_decisions_need_every_relay(records: list) -> None:  # type: ignore[type-arg]
    log = announce_phase(records[:3])
    broken = [a for a in log if not (a.round_id == records[1].round_id and a.user == 0)]
    with pytest.raises(ParameterError):
        decisions_from_log(broken, 4, (1, 3))


def test_conference_records_rejected() -> None:
    topo = Topology.star(3, (0, 1, 2))
    recs = list(iter_rounds(topo, SessionConfig(rounds=3)))
    with pytest.raises(ParameterError):
        sift_from_log(announce_phase(recs), recs)
