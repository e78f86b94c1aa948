"""Tests for `odqkd.netsim.topology` validation, graph layout and resource counting."""

from __future__ import annotations

import pytest

from odqkd.core.errors import CapacityError, ParameterError
from odqkd.detector.model import DetectorParams
from odqkd.netsim.topology import SOURCE, Topology, relay_node, resource_budget, user_node


def test_star_layout_and_graph() -> None:
    topo = Topology.star(4, (0, 1), distance_km=50.0)
    assert topo.arm_lengths_km == ((25.0, 0.0),) * 4
    assert topo.aux_users == (2, 3)
    assert not topo.conference
    g = topo.graph
    assert g.number_of_nodes() == 1 + 2 * 4
    assert g.number_of_edges() == 2 * 4
    assert g.nodes[relay_node(2)]["kind"] == "relay"
    assert topo.path_length_km(user_node(0), user_node(1)) == 50.0
    assert topo.path_length_km(SOURCE, user_node(3)) == 25.0


def test_midpoint_relays_split_the_arm() -> None:
    topo = Topology.star(3, (0, 2), distance_km=40.0, relay_at_midpoint=True)
    assert topo.arm_lengths_km[1] == (10.0, 10.0)
    assert topo.path_length_km(user_node(0), user_node(2)) == 40.0


def test_survival_probabilities() -> None:
    topo = Topology.star(2, (0, 1), distance_km=100.0, params=DetectorParams(alpha=0.2))
    surv = topo.survival()
    assert surv.shape == (2, 2)
    assert surv[0, 0] == pytest.approx(0.1)
    assert surv[0, 1] == 1.0


def test_with_comm_users_keeps_the_network() -> None:
    topo = Topology.star(5, (0, 1), distance_km=10.0, source_p=0.9)
    other = topo.with_comm_users((2, 3, 4))
    assert other.conference
    assert other.arm_lengths_km == topo.arm_lengths_km
    assert other.source_p == 0.9


def test_capacity_limit() -> None:
    with pytest.raises(CapacityError):
        Topology.star(9, (0, 1))


@pytest.mark.parametrize(
    "kwargs",
    [
        {"num_users": 1, "comm_users": (0, 1), "arm_lengths_km": ((0.0, 0.0),)},
        {"num_users": 3, "comm_users": (0, 0), "arm_lengths_km": ((0.0, 0.0),) * 3},
        {"num_users": 3, "comm_users": (0, 3), "arm_lengths_km": ((0.0, 0.0),) * 3},
        {"num_users": 4, "comm_users": (0, 1, 2, 3), "arm_lengths_km": ((0.0, 0.0),) * 4},
        {"num_users": 3, "comm_users": (0, 1), "arm_lengths_km": ((0.0, 0.0),) * 2},
        {"num_users": 2, "comm_users": (0, 1), "arm_lengths_km": ((-1.0, 0.0), (0.0, 0.0))},
        {
            "num_users": 2,
            "comm_users": (0, 1),
            "arm_lengths_km": ((0.0, 0.0),) * 2,
            "source_p": 1.5,
        },
    ],
)
def test_invalid_topologies(kwargs: dict[str, object]) -> None:
    with pytest.raises(ParameterError):
        Topology(**kwargs)  # type: ignore[arg-type]


@pytest.mark.parametrize(
    "n,relays,pairwise,detectors,conventional",
    [(2, 2, 1, 8, 4), (3, 3, 3, 12, 18), (4, 4, 6, 16, 56), (8, 8, 28, 32, 2032)],
)
def test_resource_budget(
    n: int, relays: int, pairwise: int, detectors: int, conventional: int
) -> None:
    b = resource_budget(n)
    assert b.relays_open_destination == relays
    assert b.relays_pairwise == pairwise
    assert b.detectors_open_destination == detectors
    assert b.detectors_conventional == conventional
