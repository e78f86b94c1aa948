"""
Numerical tolerances, backend limits and the experimental defaults.

Single source of truth for the constants consumed by the quantum backend, the detector model,
the key-rate engine and the configuration layer. Zero-IO, stdlib only.

Notes:
    - Defaults are the experimental parameter set used for the published simulation:
      detection efficiency 40 %, misalignment 2 %, dark count 8e-8 per gate,
      error-correction inefficiency 1.16, fiber loss 0.2 dB/km.
    - Changing a tolerance changes what the oracle accepts; tests pin the current values.
"""

from __future__ import annotations

__all__ = [
    "NORM_TOL",
    "HERMITIAN_TOL",
    "PSD_TOL",
    "NULL_PROBABILITY",
    "MAX_STATE_QUBITS",
    "MAX_TENSOR_QUBITS",
    "MIN_GHZ_QUBITS",
    "DEFAULT_ETA_D",
    "DEFAULT_E_D",
    "DEFAULT_P_D",
    "DEFAULT_F",
    "DEFAULT_ALPHA",
    "CUTOFF_XTOL_KM",
    "CSV_SCHEMA_TAG",
]

# Normalization and Hermiticity tolerance (absolute, entrywise).
NORM_TOL: float = 1e-10
HERMITIAN_TOL: float = 1e-10
# Eigenvalue floor for positive semidefiniteness and POVM upper bound slack.
PSD_TOL: float = 1e-9
# Outcomes less likely than this produce a flagged null post-state.
NULL_PROBABILITY: float = 1e-12

# GHZ sources and sessions are limited to 8 parties; compositions to 12 qubits.
MIN_GHZ_QUBITS: int = 2
MAX_STATE_QUBITS: int = 8
MAX_TENSOR_QUBITS: int = 12

DEFAULT_ETA_D: float = 0.40
DEFAULT_E_D: float = 0.02
DEFAULT_P_D: float = 8e-8
DEFAULT_F: float = 1.16
DEFAULT_ALPHA: float = 0.2

# Resolution of the zero-rate cutoff search, in km.
CUTOFF_XTOL_KM: float = 0.1

# First line of every SweepReport CSV.
CSV_SCHEMA_TAG: str = "#schema=1"
