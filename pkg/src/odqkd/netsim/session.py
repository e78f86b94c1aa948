"""
Seeded session runner: preparations, relay sampling, records, sifting and statistics.

Responsibilities
- SessionConfig: round count, seed, basis bias and worker settings.
- simulate_round / iter_rounds: deterministic per-round simulation from (seed, round_id).
- run_session: partition rounds across worker processes, sift, and estimate statistics.
- resift: reuse a session's records for a different set of communication users.

Notes
- Communication users pick Z with probability `basis_bias` and a uniform bit. Auxiliary users
  prepare a uniform X symbol, or a uniform BB84 symbol with `aux_uniform=True`.
- The record stream is ordered by round_id regardless of the number of workers.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from odqkd.core.alphabet import Basis, Bb84Symbol
from odqkd.core.errors import ParameterError
from odqkd.protocol.records import ConferenceSiftResult, RoundRecord, SiftResult
from odqkd.protocol.sifting import conference_sift_round, sift_round

from .relay import sample_relays
from .rng import MAX_SEED, round_generator
from .stats import SessionStats, estimate_statistics
from .topology import Topology

__all__ = [
    "SessionConfig",
    "SessionResult",
    "simulate_round",
    "iter_rounds",
    "simulate_rounds",
    "sift_records",
    "run_session",
    "resift",
]

logger = logging.getLogger(__name__)

_SYMBOLS = tuple(Bb84Symbol)


@dataclass(frozen=True)
class SessionConfig:
    """
    Session controls.

    Attributes:
        rounds (int): Number of rounds (>= 1).
        seed (int): 64-bit seed of the per-round substreams.
        basis_bias (float): Probability that a communication user chooses Z.
        aux_uniform (bool): Auxiliary users prepare any BB84 symbol instead of X only.
        workers (int): Worker processes (1 runs in-process).
        chunk_size (int): Rounds per worker task.
    """

    rounds: int
    seed: int = 20240601
    basis_bias: float = 0.5
    aux_uniform: bool = False
    workers: int = 1
    chunk_size: int = 10_000

    def __post_init__(self) -> None:
        if self.rounds < 1:
            raise ParameterError(f"rounds must be >= 1, got {self.rounds}")
        if not 0 <= self.seed <= MAX_SEED:
            raise ParameterError(f"seed must be a 64-bit unsigned value, got {self.seed}")
        if not 0.0 <= self.basis_bias <= 1.0:
            raise ParameterError(f"basis_bias must lie in [0, 1], got {self.basis_bias}")
        if self.workers < 1 or self.chunk_size < 1:
            raise ParameterError("workers and chunk_size must be >= 1")


@dataclass(frozen=True)
class SessionResult:
    """Records, sifting outcomes and statistics of one session."""

    topology: Topology
    config: SessionConfig
    records: tuple[RoundRecord, ...]
    sift_results: tuple[SiftResult | ConferenceSiftResult, ...]
    stats: SessionStats


def _prepare(
    rng: np.random.Generator, topology: Topology, config: SessionConfig
) -> tuple[Bb84Symbol, ...]:
    n = topology.num_users
    basis_draw = rng.random(n)
    bits = rng.integers(0, 2, size=n)
    uniform = rng.integers(0, 4, size=n)
    preps: list[Bb84Symbol] = []
    for i in range(n):
        if i in topology.comm_users:
            basis = Basis.Z if basis_draw[i] < config.basis_bias else Basis.X
            preps.append(Bb84Symbol.from_bit(basis, int(bits[i])))
        elif config.aux_uniform:
            preps.append(_SYMBOLS[int(uniform[i])])
        else:
            preps.append(Bb84Symbol.from_bit(Basis.X, int(bits[i])))
    return tuple(preps)


def simulate_round(
    topology: Topology, config: SessionConfig, round_id: int, survival: np.ndarray | None = None
) -> RoundRecord:
    """Simulate one round; the result depends only on (topology, seed, round_id)."""
    rng = round_generator(config.seed, round_id)
    preps = _prepare(rng, topology, config)
    params = topology.params
    bsm = sample_relays(
        rng,
        topology.num_users,
        topology.source_p,
        params.eta_d,
        params.p_d,
        params.e_d,
        topology.comm_users[1],
        topology.survival() if survival is None else survival,
        preps,
    )
    return RoundRecord.from_round(round_id, preps, bsm, topology.comm_users)


def simulate_rounds(
    topology: Topology, config: SessionConfig, start: int, stop: int
) -> list[RoundRecord]:
    """Rounds [start, stop) in order. Top-level so worker processes can import it."""
    survival = topology.survival()
    return [simulate_round(topology, config, r, survival) for r in range(start, stop)]


def _chunks(config: SessionConfig) -> list[tuple[int, int]]:
    step = config.chunk_size
    return [(s, min(s + step, config.rounds)) for s in range(0, config.rounds, step)]


def iter_rounds(topology: Topology, config: SessionConfig) -> Iterator[RoundRecord]:
    """
    Stream the session's records in round order.

    With more than one worker, chunks are simulated in a process pool and yielded in
    submission order.
    """
    chunks = _chunks(config)
    if config.workers == 1 or len(chunks) == 1:
        for start, stop in chunks:
            yield from simulate_rounds(topology, config, start, stop)
        return
    with ProcessPoolExecutor(max_workers=config.workers) as pool:
        futures = [pool.submit(simulate_rounds, topology, config, s, e) for s, e in chunks]
        for fut in futures:
            yield from fut.result()


def sift_records(
    records: Sequence[RoundRecord],
) -> tuple[SiftResult | ConferenceSiftResult, ...]:
    """Sift each record with the two-party or conference rule matching its comm_users."""
    out: list[SiftResult | ConferenceSiftResult] = []
    for rec in records:
        if len(rec.comm_users) == 3:
            out.append(conference_sift_round(rec))
        else:
            out.append(sift_round(rec))
    return tuple(out)


def run_session(topology: Topology, config: SessionConfig) -> SessionResult:
    """
    Simulate, sift and summarize a session.

    Examples:
        >>> from odqkd.detector import DetectorParams
        >>> topo = Topology.star(4, (0, 1), params=DetectorParams(eta_d=1.0, p_d=0.0, e_d=0.0))
        >>> res = run_session(topo, SessionConfig(rounds=2000, seed=1))
        >>> res.stats.qber_z.value
        0.0
    """
    logger.info(
        "session: N=%d comm=%s rounds=%d seed=%d workers=%d",
        topology.num_users,
        topology.comm_users,
        config.rounds,
        config.seed,
        config.workers,
    )
    records = tuple(iter_rounds(topology, config))
    results = sift_records(records)
    stats = estimate_statistics(records, results, f=topology.params.f)
    logger.info("session: %d/%d rounds kept", stats.kept, stats.rounds)
    return SessionResult(topology, config, records, results, stats)


def resift(
    records: Sequence[RoundRecord], comm_users: Sequence[int], *, f: float | None = None
) -> tuple[tuple[RoundRecord, ...], tuple[SiftResult | ConferenceSiftResult, ...], SessionStats]:
    """
    Re-sift recorded rounds for another set of communication users.

    The preparations and relay outcomes are reused as they are; only the roles change.
    """
    rerolled = tuple(rec.for_comm_users(comm_users) for rec in records)
    results = sift_records(rerolled)
    kwargs = {} if f is None else {"f": f}
    return rerolled, results, estimate_statistics(rerolled, results, **kwargs)
