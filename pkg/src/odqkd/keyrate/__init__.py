"""
Analytic key-rate engine.

## Responsibilities
- Binary entropy, link budget, single-photon yield and per-basis error rates.
- Two-party (ideal and realistic) and three-party conference key rates.
- Distance sweeps with zero-rate cutoffs and their tabular/JSON forms.

## Public API
- formulas: LinkBudget, KeyRatePoint, binary_entropy, link_budget, yield_single_photon,
  qber_zz, phase_error_xx, key_rate_ideal, key_rate_realistic, realistic_rate_unclamped,
  yield_vanishes, key_rate_conference
- sweep: SweepReport, CutoffPoint, CSV_COLUMNS, cutoff_distance, sweep

## Import DAG discipline
- Imports odqkd.core and odqkd.detector; never odqkd.netsim or odqkd.io.

## Examples
>>> from odqkd.detector import DetectorParams
>>> from odqkd.keyrate import cutoff_distance
>>> cutoff_distance(1.0, DetectorParams()) > 500
True
"""

from .formulas import (
    KeyRatePoint,
    LinkBudget,
    binary_entropy,
    key_rate_conference,
    key_rate_ideal,
    key_rate_realistic,
    link_budget,
    phase_error_xx,
    qber_zz,
    realistic_rate_unclamped,
    yield_single_photon,
    yield_vanishes,
)
from .sweep import CSV_COLUMNS, CutoffPoint, SweepReport, cutoff_distance, sweep

__all__ = [
    "KeyRatePoint",
    "LinkBudget",
    "binary_entropy",
    "key_rate_conference",
    "key_rate_ideal",
    "key_rate_realistic",
    "link_budget",
    "phase_error_xx",
    "qber_zz",
    "realistic_rate_unclamped",
    "yield_single_photon",
    "yield_vanishes",
    "CSV_COLUMNS",
    "CutoffPoint",
    "SweepReport",
    "cutoff_distance",
    "sweep",
]
