"""
Seeded event-level simulator of the star network.

## Responsibilities
- Topology of source, relays and users (networkx graph with fiber lengths).
- Per-round counter-based RNG substreams so any worker partition reproduces the same stream.
- Relay physics: exact Born sampling on the Werner GHZ source, loss, clicks and dark counts.
- Session runner emitting RoundRecords, the public announcement log and SessionStats.
- Comparison of the estimates with the closed-form key-rate chain.

## Public API
- topology: Topology, ResourceBudget, resource_budget
- rng: round_generator
- relay: sample_relays, joint_distribution, relay_family
- session: SessionConfig, SessionResult, simulate_round, iter_rounds, run_session, resift
- announce: Announcement, announce_phase, decisions_from_log, sift_from_log
- stats: Estimate, SessionStats, ConferenceStats, estimate_statistics, compare_with_analytic

## Import DAG discipline
- Top of the domain stack: imports core, quantum, protocol, detector and keyrate.
  Never imports odqkd.io or odqkd.cli.

## Examples
>>> from odqkd.netsim import SessionConfig, Topology, run_session
>>> res = run_session(Topology.star(3, (0, 1), distance_km=10.0), SessionConfig(rounds=50))
>>> res.stats.rounds
50
"""

from .announce import Announcement, announce_phase, decisions_from_log, sift_from_log
from .relay import joint_distribution, relay_family, sample_relays
from .rng import round_generator
from .session import (
    SessionConfig,
    SessionResult,
    iter_rounds,
    resift,
    run_session,
    sift_records,
    simulate_round,
    simulate_rounds,
)
from .stats import (
    AnalyticComparison,
    ConferenceStats,
    Estimate,
    MetricDelta,
    SessionStats,
    compare_with_analytic,
    estimate_statistics,
    is_heralded,
)
from .topology import ResourceBudget, Topology, resource_budget

__all__ = [
    "Announcement",
    "announce_phase",
    "decisions_from_log",
    "sift_from_log",
    "joint_distribution",
    "relay_family",
    "sample_relays",
    "round_generator",
    "SessionConfig",
    "SessionResult",
    "iter_rounds",
    "resift",
    "run_session",
    "sift_records",
    "simulate_round",
    "simulate_rounds",
    "AnalyticComparison",
    "ConferenceStats",
    "Estimate",
    "MetricDelta",
    "SessionStats",
    "compare_with_analytic",
    "estimate_statistics",
    "is_heralded",
    "ResourceBudget",
    "Topology",
    "resource_budget",
]
