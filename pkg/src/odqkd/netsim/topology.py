"""
Star topology of the network: one GHZ source, one relay per user, fiber on every edge.

Responsibilities
- Topology: user count, communication users, per-user arm lengths, detector parameters and
  the Werner weight of the source; validated at construction.
- The networkx graph of source, relays and users with `length_km` on each edge.
- Per-arm photon survival probabilities and the resource budget of the network.

Notes
- Arm lengths are (source → relay, user → relay) in km. Relays colocated with their user have
  a zero user arm.
- Survival of a photon over d km is 10^(−α·d/10).
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx
import numpy as np

from odqkd.core.constants import MAX_STATE_QUBITS
from odqkd.core.errors import CapacityError, ParameterError
from odqkd.detector.model import DetectorParams

__all__ = [
    "SOURCE",
    "Topology",
    "ResourceBudget",
    "relay_node",
    "user_node",
    "resource_budget",
]

SOURCE = "source"


def relay_node(i: int) -> str:
    return f"relay-{i}"


def user_node(i: int) -> str:
    return f"user-{i}"


@dataclass(frozen=True)
class Topology:
    """
    The network a session runs on.

    Attributes:
        num_users (int): N, between 2 and 8.
        comm_users (tuple[int, ...]): Communication users (2 or 3 distinct indices < N).
        arm_lengths_km (tuple[tuple[float, float], ...]): Per user (source → relay,
            user → relay) fiber lengths.
        params (DetectorParams): Detector and fiber parameters shared by every relay.
        source_p (float): Werner weight of the GHZ source in [0, 1].

    Raises:
        CapacityError: If num_users exceeds 8.
        ParameterError: If any other field is out of range.

    Examples:
        >>> topo = Topology.star(4, (0, 1), distance_km=50.0)
        >>> topo.arm_lengths_km[0], topo.aux_users
        ((25.0, 0.0), (2, 3))
    """

    num_users: int
    comm_users: tuple[int, ...]
    arm_lengths_km: tuple[tuple[float, float], ...]
    params: DetectorParams = field(default_factory=DetectorParams)
    source_p: float = 1.0

    def __post_init__(self) -> None:
        n = self.num_users
        if n > MAX_STATE_QUBITS:
            raise CapacityError(f"exact-state backend supports at most {MAX_STATE_QUBITS} users")
        if n < 2:
            raise ParameterError(f"need at least 2 users, got {n}")
        comm = tuple(int(u) for u in self.comm_users)
        if len(comm) not in (2, 3) or len(set(comm)) != len(comm):
            raise ParameterError(f"comm_users must be 2 or 3 distinct users, got {comm}")
        if any(u < 0 or u >= n for u in comm):
            raise ParameterError(f"comm_users {comm} out of range for {n} users")
        if len(self.arm_lengths_km) != n:
            raise ParameterError(f"expected {n} arm length pairs, got {len(self.arm_lengths_km)}")
        arms = tuple((float(s), float(u)) for s, u in self.arm_lengths_km)
        if any(s < 0 or u < 0 for s, u in arms):
            raise ParameterError("arm lengths must be >= 0")
        if not 0.0 <= self.source_p <= 1.0:
            raise ParameterError(f"source_p must lie in [0, 1], got {self.source_p}")
        object.__setattr__(self, "comm_users", comm)
        object.__setattr__(self, "arm_lengths_km", arms)

    @classmethod
    def star(
        cls,
        num_users: int,
        comm_users: Sequence[int],
        distance_km: float = 0.0,
        params: DetectorParams | None = None,
        source_p: float = 1.0,
        *,
        relay_at_midpoint: bool = False,
    ) -> Topology:
        """
        Symmetric star where every pair of users is `distance_km` apart through the source.

        With relays at the users each source arm is distance/2; with relays at the midpoint
        both the source photon and the user photon travel distance/4.
        """
        if distance_km < 0:
            raise ParameterError(f"distance must be >= 0, got {distance_km}")
        half = distance_km / 2.0
        arm = (half / 2.0, half / 2.0) if relay_at_midpoint else (half, 0.0)
        return cls(
            num_users=num_users,
            comm_users=tuple(comm_users),
            arm_lengths_km=tuple(arm for _ in range(num_users)),
            params=params if params is not None else DetectorParams(),
            source_p=source_p,
        )

    @property
    def aux_users(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.num_users) if i not in self.comm_users)

    @property
    def conference(self) -> bool:
        return len(self.comm_users) == 3

    def with_comm_users(self, comm_users: Sequence[int]) -> Topology:
        """Same network with a different set of communication users."""
        return Topology(
            num_users=self.num_users,
            comm_users=tuple(comm_users),
            arm_lengths_km=self.arm_lengths_km,
            params=self.params,
            source_p=self.source_p,
        )

    @cached_property
    def graph(self) -> nx.Graph:
        """Undirected star: source — relay-i — user-i, edges weighted by `length_km`."""
        g = nx.Graph()
        g.add_node(SOURCE, kind="source")
        for i, (source_km, user_km) in enumerate(self.arm_lengths_km):
            g.add_node(relay_node(i), kind="relay", user=i)
            g.add_node(user_node(i), kind="user", user=i)
            g.add_edge(SOURCE, relay_node(i), length_km=source_km)
            g.add_edge(user_node(i), relay_node(i), length_km=user_km)
        return g

    def path_length_km(self, a: str, b: str) -> float:
        """Fiber length of the shortest path between two nodes."""
        return float(nx.shortest_path_length(self.graph, a, b, weight="length_km"))

    def survival(self) -> np.ndarray:
        """
        Photon survival probabilities of shape (N, 2): column 0 for the source photon reaching
        relay i, column 1 for user i's photon.
        """
        lengths = np.array(
            [
                [
                    self.graph.edges[SOURCE, relay_node(i)]["length_km"],
                    self.graph.edges[user_node(i), relay_node(i)]["length_km"],
                ]
                for i in range(self.num_users)
            ],
            dtype=np.float64,
        )
        return np.power(10.0, -self.params.alpha * lengths / 10.0)


@dataclass(frozen=True)
class ResourceBudget:
    """
    Relay and detector counts for N users.

    Attributes:
        num_users (int): N.
        relays_open_destination (int): One relay per user.
        relays_pairwise (int): One relay per pair in conventional MDI-QKD.
        detectors_open_destination (int): Four detectors per relay.
        detectors_conventional (int): Two-party plus conference schemes for every subset of
            at least two users, (2^N − 2)·N.
    """

    num_users: int
    relays_open_destination: int
    relays_pairwise: int
    detectors_open_destination: int
    detectors_conventional: int


def resource_budget(num_users: int) -> ResourceBudget:
    """
    Count the hardware needed to connect N users.

    Examples:
        >>> b = resource_budget(4)
        >>> b.relays_pairwise, b.detectors_open_destination, b.detectors_conventional
        (6, 16, 56)
    """
    if num_users < 2:
        raise ParameterError(f"need at least 2 users, got {num_users}")
    n = num_users
    return ResourceBudget(
        num_users=n,
        relays_open_destination=n,
        relays_pairwise=n * (n - 1) // 2,
        detectors_open_destination=4 * n,
        detectors_conventional=(2**n - 2) * n,
    )
