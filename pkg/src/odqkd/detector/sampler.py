"""
Click-level Monte Carlo of the relay: photon routing, threshold detection and classification.

Responsibilities
- Route photons to the four detectors (D1H, D1V, D2H, D2V) behind the beam splitter and
  polarizing beam splitters.
- Turn photon counts into clicks with efficiency η_d and independent dark counts p_d.
- Classify a click pattern as ψ+, ψ− or Failure (shared with the network simulator).
- Estimate success probabilities for HH, HV and single-photon inputs.

Notes
- Detector order in every array is (D1H, D1V, D2H, D2V).
- ψ+ is a coincidence on one side ({D1H, D1V} or {D2H, D2V}); ψ− is a cross coincidence
  ({D1H, D2V} or {D1V, D2H}). Every other pattern, including three or four clicks, is Failure.
- Sampling is chunked so memory stays bounded for 10⁷ samples.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from typing import Literal, NamedTuple

import numpy as np

from odqkd.core.alphabet import BsmOutcome
from odqkd.core.errors import ParameterError

from .model import DetectorParams, prob_bsm_diff_pol, prob_bsm_same_pol, prob_bsm_single

__all__ = [
    "D1H",
    "D1V",
    "D2H",
    "D2V",
    "OUTCOME_CODES",
    "PhotonInput",
    "BsmSuccessEstimate",
    "classify_clicks",
    "classify_click_matrix",
    "clicks_from_photons",
    "route_photons",
    "expected_success",
    "sample_bsm_success",
]

logger = logging.getLogger(__name__)

D1H, D1V, D2H, D2V = 0, 1, 2, 3

# Integer codes used by the vectorized classifier, indexed into this tuple.
OUTCOME_CODES: tuple[BsmOutcome, BsmOutcome, BsmOutcome] = (
    BsmOutcome.PSI_PLUS,
    BsmOutcome.PSI_MINUS,
    BsmOutcome.FAILURE,
)
_FAIL_CODE = 2

PhotonInput = Literal["HH", "HV", "H0"]
_INPUTS: tuple[PhotonInput, ...] = ("HH", "HV", "H0")

_DEFAULT_CHUNK = 1_000_000


class BsmSuccessEstimate(NamedTuple):
    """Monte Carlo estimate of a success probability with its binomial standard error."""

    successes: int
    samples: int
    estimate: float
    stderr: float


def classify_click_matrix(clicks: np.ndarray) -> np.ndarray:
    """
    Vectorized classification of click patterns.

    Args:
        clicks (np.ndarray): Boolean array of shape (..., 4) in detector order.

    Returns:
        np.ndarray: Integer codes (0 = ψ+, 1 = ψ−, 2 = Failure) of shape clicks.shape[:-1].

    Raises:
        ParameterError: If the last axis is not of length 4.
    """
    c = np.asarray(clicks, dtype=bool)
    if c.shape[-1] != 4:
        raise ParameterError(f"click patterns need 4 detectors, got shape {c.shape}")
    h = c[..., D1H].astype(np.int8) + c[..., D2H]
    v = c[..., D1V].astype(np.int8) + c[..., D2V]
    success = (h == 1) & (v == 1)
    same_side = (c[..., D1H] & c[..., D1V]) | (c[..., D2H] & c[..., D2V])
    return np.where(success, np.where(same_side, 0, 1), _FAIL_CODE).astype(np.int8)


def classify_clicks(clicks: Sequence[bool] | np.ndarray) -> BsmOutcome:
    """
    Classify one four-detector click pattern.

    Examples:
        >>> classify_clicks([True, True, False, False]).value
        'psi+'
        >>> classify_clicks([True, False, False, True]).value
        'psi-'
        >>> classify_clicks([True, False, True, False]).value
        'fail'
    """
    code = int(classify_click_matrix(np.asarray(clicks, dtype=bool)))
    return OUTCOME_CODES[code]


def clicks_from_photons(
    rng: np.random.Generator, photons: np.ndarray, eta_d: float, p_d: float
) -> np.ndarray:
    """
    Threshold detection of photon counts.

    A detector with n incident photons clicks with probability 1 − (1−η_d)ⁿ, OR-ed with an
    independent dark count of probability p_d.

    Args:
        rng (np.random.Generator): Source of randomness.
        photons (np.ndarray): Nonnegative integer counts of shape (..., 4).
        eta_d (float): Detection efficiency.
        p_d (float): Dark count probability.

    Returns:
        np.ndarray: Boolean clicks with the shape of `photons`.
    """
    counts = np.asarray(photons)
    detect = rng.random(counts.shape) < 1.0 - (1.0 - eta_d) ** counts
    dark = rng.random(counts.shape) < p_d
    return detect | dark


def route_photons(rng: np.random.Generator, inputs: PhotonInput, size: int) -> np.ndarray:
    """
    Photon counts per detector for `size` independent uses of the relay.

    - HH: the two H photons bunch and leave together towards D1H or D2H.
    - HV: the H photon reaches D1H or D2H and the V photon D1V or D2V, independently.
    - H0: a single H photon reaches D1H or D2H.
    """
    if inputs not in _INPUTS:
        raise ParameterError(f"inputs must be one of {_INPUTS}, got {inputs!r}")
    photons = np.zeros((size, 4), dtype=np.int64)
    rows = np.arange(size)
    h_side = rng.integers(0, 2, size=size)
    photons[rows, 2 * h_side] = 2 if inputs == "HH" else 1
    if inputs == "HV":
        v_side = rng.integers(0, 2, size=size)
        photons[rows, 2 * v_side + 1] = 1
    return photons


def expected_success(params: DetectorParams, inputs: PhotonInput) -> float:
    """Closed-form success probability matching `inputs`."""
    if inputs == "HH":
        return prob_bsm_same_pol(params)
    if inputs == "HV":
        return prob_bsm_diff_pol(params)
    if inputs == "H0":
        return prob_bsm_single(params)
    raise ParameterError(f"inputs must be one of {_INPUTS}, got {inputs!r}")


def sample_bsm_success(
    params: DetectorParams,
    inputs: PhotonInput,
    samples: int,
    seed: int,
    *,
    chunk_size: int = _DEFAULT_CHUNK,
) -> BsmSuccessEstimate:
    """
    Estimate the probability that the relay announces ψ+ or ψ− for the given inputs.

    Args:
        params (DetectorParams): Efficiency and dark count of the four detectors.
        inputs (PhotonInput): "HH", "HV" or "H0".
        samples (int): Number of relay uses (>= 1).
        seed (int): Seed for numpy's default generator.
        chunk_size (int): Samples drawn per vectorized batch.

    Returns:
        BsmSuccessEstimate: Counts, estimate and standard error sqrt(p̂(1−p̂)/n).

    Raises:
        ParameterError: If samples or chunk_size is < 1, or inputs is unknown.
    """
    if samples < 1 or chunk_size < 1:
        raise ParameterError(f"samples and chunk_size must be >= 1, got {samples}, {chunk_size}")
    rng = np.random.default_rng(seed)
    successes = 0
    remaining = samples
    while remaining:
        m = min(remaining, chunk_size)
        photons = route_photons(rng, inputs, m)
        clicks = clicks_from_photons(rng, photons, params.eta_d, params.p_d)
        successes += int(np.count_nonzero(classify_click_matrix(clicks) != _FAIL_CODE))
        remaining -= m
    estimate = successes / samples
    stderr = math.sqrt(estimate * (1.0 - estimate) / samples)
    logger.debug("%s: %d/%d successes (%.3g ± %.2g)", inputs, successes, samples, estimate, stderr)
    return BsmSuccessEstimate(successes, samples, estimate, stderr)
