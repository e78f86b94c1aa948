"""Tests for `odqkd.detector.sampler` click classification and Monte Carlo estimates."""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from odqkd.core.alphabet import BsmOutcome
from odqkd.core.errors import ParameterError
from odqkd.detector.model import DetectorParams
from odqkd.detector.sampler import (
    PhotonInput,
    classify_click_matrix,
    classify_clicks,
    clicks_from_photons,
    expected_success,
    route_photons,
    sample_bsm_success,
)


@pytest.mark.parametrize(
    "pattern,expected",
    [
        ((1, 1, 0, 0), BsmOutcome.PSI_PLUS),
        ((0, 0, 1, 1), BsmOutcome.PSI_PLUS),
        ((1, 0, 0, 1), BsmOutcome.PSI_MINUS),
        ((0, 1, 1, 0), BsmOutcome.PSI_MINUS),
        ((1, 0, 1, 0), BsmOutcome.FAILURE),
        ((0, 1, 0, 1), BsmOutcome.FAILURE),
        ((1, 1, 1, 0), BsmOutcome.FAILURE),
        ((1, 1, 1, 1), BsmOutcome.FAILURE),
        ((0, 0, 0, 0), BsmOutcome.FAILURE),
        ((1, 0, 0, 0), BsmOutcome.FAILURE),
    ],
)
def test_classify_clicks(pattern: tuple[int, ...], expected: BsmOutcome) -> None:
    assert classify_clicks([bool(c) for c in pattern]) is expected


def test_only_four_patterns_succeed() -> None:
    patterns = np.array(list(itertools.product((False, True), repeat=4)))
    codes = classify_click_matrix(patterns)
    assert codes.shape == (16,)
    assert np.count_nonzero(codes == 0) == 2
    assert np.count_nonzero(codes == 1) == 2


def test_classify_rejects_wrong_width() -> None:
    with pytest.raises(ParameterError):
        classify_click_matrix(np.zeros((3, 5), dtype=bool))


def test_routing_conserves_photons() -> None:
    rng = np.random.default_rng(0)
    hh = route_photons(rng, "HH", 1000)
    hv = route_photons(rng, "HV", 1000)
    h0 = route_photons(rng, "H0", 1000)
    assert (hh.sum(axis=1) == 2).all() and (hh[:, [1, 3]] == 0).all()
    assert (hh.max(axis=1) == 2).all()
    assert (hv[:, [0, 2]].sum(axis=1) == 1).all() and (hv[:, [1, 3]].sum(axis=1) == 1).all()
    assert (h0.sum(axis=1) == 1).all()
    with pytest.raises(ParameterError):
        route_photons(rng, "VV", 1)  # type: ignore[arg-type]


def test_perfect_detectors_click_deterministically() -> None:
    rng = np.random.default_rng(1)
    photons = np.array([[2, 0, 0, 0], [0, 1, 1, 0]])
    clicks = clicks_from_photons(rng, photons, eta_d=1.0, p_d=0.0)
    assert clicks.tolist() == [[True, False, False, False], [False, True, True, False]]


def test_hv_perfect_detectors_always_succeed() -> None:
    est = sample_bsm_success(DetectorParams(eta_d=1.0, p_d=0.0), "HV", 10_000, seed=3)
    assert est.successes == 10_000
    assert est.stderr == 0.0


def test_sampler_is_deterministic_across_chunking() -> None:
    params = DetectorParams(eta_d=0.5, p_d=0.05)
    a = sample_bsm_success(params, "HH", 20_000, seed=7)
    b = sample_bsm_success(params, "HH", 20_000, seed=7)
    assert a == b


@pytest.mark.parametrize(
    "params,inputs",
    [
        (DetectorParams(eta_d=0.4, p_d=0.05), "HH"),
        (DetectorParams(eta_d=0.4, p_d=0.05), "HV"),
        (DetectorParams(eta_d=0.4, p_d=8e-8), "HV"),
        (DetectorParams(eta_d=1.0, p_d=0.05), "H0"),
    ],
)
def test_sampler_matches_closed_forms(params: DetectorParams, inputs: PhotonInput) -> None:
    est = sample_bsm_success(params, inputs, 400_000, seed=11, chunk_size=150_000)
    expected = expected_success(params, inputs)
    assert abs(est.estimate - expected) <= 4 * max(est.stderr, 1e-6)


@pytest.mark.slow
@pytest.mark.parametrize("inputs", ["HH", "HV", "H0"])
def test_sampler_matches_closed_forms_ten_million(inputs: PhotonInput) -> None:
    params = DetectorParams(eta_d=1.0, p_d=0.02) if inputs == "H0" else DetectorParams(p_d=0.02)
    est = sample_bsm_success(params, inputs, 10_000_000, seed=2024)
    assert abs(est.estimate - expected_success(params, inputs)) <= 3 * est.stderr


def test_sampler_rejects_bad_arguments() -> None:
    with pytest.raises(ParameterError):
        sample_bsm_success(DetectorParams(), "HV", 0, seed=1)
    with pytest.raises(ParameterError):
        expected_success(DetectorParams(), "XY")  # type: ignore[arg-type]
