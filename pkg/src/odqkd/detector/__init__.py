"""
Relay detector model: closed forms, equivalent detector and click-level sampler.

## Responsibilities
- Success probabilities of the linear-optics BSM for HH, HV and single-photon inputs.
- Equivalent per-basis efficiencies and dark count consumed by `odqkd.keyrate`.
- Click routing and ψ± classification shared with `odqkd.netsim`.

## Public API
- Models: DetectorParams, EquivalentDetector
- Closed forms: prob_bsm_same_pol, prob_bsm_diff_pol, prob_bsm_single, equivalent_eff_z,
  equivalent_eff_x, equivalent_dark, equivalent_detector, round_to_sig
- Sampler: classify_clicks, classify_click_matrix, clicks_from_photons, route_photons,
  expected_success, sample_bsm_success, BsmSuccessEstimate

## Import DAG discipline
- Imports from odqkd.core only.

## Examples
>>> from odqkd.detector import DetectorParams, equivalent_detector
>>> equivalent_detector(DetectorParams()).rounded()
(0.08, 0.16, 6.4e-08)
"""

from .model import (
    DetectorParams,
    EquivalentDetector,
    equivalent_dark,
    equivalent_detector,
    equivalent_eff_x,
    equivalent_eff_z,
    prob_bsm_diff_pol,
    prob_bsm_same_pol,
    prob_bsm_single,
    round_to_sig,
)
from .sampler import (
    BsmSuccessEstimate,
    PhotonInput,
    classify_click_matrix,
    classify_clicks,
    clicks_from_photons,
    expected_success,
    route_photons,
    sample_bsm_success,
)

__all__ = [
    "DetectorParams",
    "EquivalentDetector",
    "equivalent_dark",
    "equivalent_detector",
    "equivalent_eff_x",
    "equivalent_eff_z",
    "prob_bsm_diff_pol",
    "prob_bsm_same_pol",
    "prob_bsm_single",
    "round_to_sig",
    "BsmSuccessEstimate",
    "PhotonInput",
    "classify_click_matrix",
    "classify_clicks",
    "clicks_from_photons",
    "expected_success",
    "route_photons",
    "sample_bsm_success",
]
