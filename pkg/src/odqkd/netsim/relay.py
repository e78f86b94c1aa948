"""
Physical layer of one round: Werner GHZ source, lossy arms, relays and their detectors.

Responsibilities
- Build the effective measurement on each source qubit from what reaches its relay (both
  photons, one of them, or neither) and the user's prepared photon.
- Sample the joint relay outcome from exact Born probabilities, route the photons to the four
  detectors, add dark counts and classify the click pattern.

Notes
- With both photons present the relay projects onto {ψ+, ψ−, |HH⟩, |VV⟩}; only ψ± give
  distinguishable coincidences, |HH⟩/|VV⟩ bunch into one detector.
- A lone photon is analysed in Z by the polarizing beam splitters.
- Misalignment is a Pauli-Y channel of strength e_d on the source qubit of the second
  communication user; Y flips both Z and X correlations.
- Outcome distributions are cached per (source state, relay configuration).
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from functools import lru_cache

import numpy as np

from odqkd.core.alphabet import Bb84Symbol, BsmOutcome
from odqkd.detector.sampler import (
    D1H,
    D1V,
    OUTCOME_CODES,
    classify_click_matrix,
    clicks_from_photons,
)
from odqkd.quantum.measurement import local_outcome_distribution, pauli_channel
from odqkd.quantum.states import DensityOperator, basis_state, bell_state, werner_ghz

__all__ = [
    "RelayInput",
    "relay_family",
    "source_state",
    "joint_distribution",
    "sample_relays",
]

logger = logging.getLogger(__name__)

# (source photon arrived, user photon arrived, user's symbol)
RelayInput = tuple[bool, bool, Bb84Symbol]

# Photon content reaching the detectors for each outcome label: (H photons, V photons), and
# whether H and V leave on the same side of the beam splitter.
_PHOTONS: dict[str, tuple[int, int, bool]] = {
    "psi+": (1, 1, True),
    "psi-": (1, 1, False),
    "HH": (2, 0, True),
    "VV": (0, 2, True),
    "H": (1, 0, True),
    "V": (0, 1, True),
    "": (0, 0, True),
}

_IDENTITY = np.eye(2, dtype=np.complex128)
_Z_PROJECTORS = np.stack(
    [np.diag([1.0, 0.0]).astype(np.complex128), np.diag([0.0, 1.0]).astype(np.complex128)]
)


def _two_photon_projectors() -> np.ndarray:
    """Projectors on (source photon, user photon): ψ+, ψ−, |HH⟩, |VV⟩."""
    vecs = [
        bell_state("psi+").amplitudes,
        bell_state("psi-").amplitudes,
        np.array([1, 0, 0, 0], dtype=np.complex128),
        np.array([0, 0, 0, 1], dtype=np.complex128),
    ]
    return np.stack([np.outer(v, v.conj()) for v in vecs])


_PAIR_PROJECTORS = _two_photon_projectors()
_PAIR_LABELS = ("psi+", "psi-", "HH", "VV")


@lru_cache(maxsize=64)
def relay_family(relay: RelayInput) -> tuple[np.ndarray, tuple[str, ...]]:
    """
    Effective POVM on the source qubit and the outcome labels for one relay.

    Returns:
        tuple[np.ndarray, tuple[str, ...]]: Operators of shape (m, 2, 2) and their labels.
    """
    source_in, user_in, symbol = relay
    ket = basis_state(symbol).amplitudes
    if source_in and user_in:
        pair = _PAIR_PROJECTORS.reshape(4, 2, 2, 2, 2)
        ops = np.einsum("u,kaubv,v->kab", ket.conj(), pair, ket)
        return ops, _PAIR_LABELS
    if source_in:
        return _Z_PROJECTORS, ("H", "V")
    if user_in:
        weights = np.abs(ket) ** 2
        return np.stack([w * _IDENTITY for w in weights]), ("H", "V")
    return _IDENTITY[np.newaxis], ("",)


@lru_cache(maxsize=32)
def source_state(
    num_users: int, p: float, misalignment: float, misaligned_qubit: int
) -> DensityOperator:
    """Werner GHZ state after the misalignment channel on one qubit."""
    rho = werner_ghz(num_users, p)
    if misalignment > 0.0:
        rho = pauli_channel(rho, misaligned_qubit, "Y", misalignment)
    return rho


@lru_cache(maxsize=4096)
def joint_distribution(
    num_users: int,
    p: float,
    misalignment: float,
    misaligned_qubit: int,
    relays: tuple[RelayInput, ...],
) -> tuple[np.ndarray, tuple[tuple[str, ...], ...]]:
    """
    Flattened joint outcome probabilities of all relays and the per-relay labels.

    The probabilities are renormalized to sum to one; rounding noise below zero has already
    been clipped.
    """
    rho = source_state(num_users, p, misalignment, misaligned_qubit)
    families = [relay_family(r) for r in relays]
    probs = local_outcome_distribution(rho, [ops for ops, _ in families]).ravel()
    probs = probs / probs.sum()
    logger.debug("joint distribution computed for %s", relays)
    return probs, tuple(labels for _, labels in families)


def _route(rng: np.random.Generator, labels: Sequence[str]) -> np.ndarray:
    """Photon counts per detector (rows: relays, columns: D1H, D1V, D2H, D2V)."""
    photons = np.zeros((len(labels), 4), dtype=np.int64)
    sides = rng.integers(0, 2, size=len(labels))
    for i, label in enumerate(labels):
        h, v, same_side = _PHOTONS[label]
        side = int(sides[i])
        v_side = side if same_side else 1 - side
        photons[i, D1H + 2 * side] += h
        photons[i, D1V + 2 * v_side] += v
    return photons


def sample_relays(
    rng: np.random.Generator,
    num_users: int,
    p: float,
    eta_d: float,
    p_d: float,
    misalignment: float,
    misaligned_qubit: int,
    survival: np.ndarray,
    preparations: Sequence[Bb84Symbol],
) -> tuple[BsmOutcome, ...]:
    """
    Announce one relay outcome per user.

    Args:
        rng (np.random.Generator): The round's generator.
        num_users (int): N.
        p (float): Werner weight.
        eta_d (float): Detector efficiency.
        p_d (float): Dark count probability.
        misalignment (float): e_d.
        misaligned_qubit (int): Source qubit receiving the misalignment channel.
        survival (np.ndarray): (N, 2) survival probabilities of source and user photons.
        preparations (Sequence[Bb84Symbol]): Users' symbols.

    Returns:
        tuple[BsmOutcome, ...]: ψ+, ψ− or FAILURE per relay.
    """
    arrived = rng.random(survival.shape) < survival
    relays = tuple(
        (bool(arrived[i, 0]), bool(arrived[i, 1]), preparations[i]) for i in range(num_users)
    )
    probs, labels = joint_distribution(num_users, p, misalignment, misaligned_qubit, relays)
    flat = int(rng.choice(probs.size, p=probs))
    shape = tuple(len(lab) for lab in labels)
    index = np.unravel_index(flat, shape)
    outcome_labels = [labels[i][int(index[i])] for i in range(num_users)]
    clicks = clicks_from_photons(rng, _route(rng, outcome_labels), eta_d, p_d)
    return tuple(OUTCOME_CODES[int(c)] for c in classify_click_matrix(clicks))
