"""
odqkd.quantum — Exact dense state-vector/density-matrix backend (up to 12 qubits).

## Responsibilities
- Construct the states the protocol uses (BB84 preparations, Bell and GHZ states, Werner mixtures).
- Compose registers, measure POVM elements with the Lüders rule, trace out subsystems.
- Serve as ground truth for the sifting tables and the relay physics of the simulator.

## Public API
- states — PureState, DensityOperator and their constructors.
- measurement — MeasurementOperator, measure, partial_trace, channels, local outcome distributions.

## Import DAG discipline
- Depends on: stdlib, numpy, odqkd.core.
- Must not import odqkd.protocol, odqkd.netsim or odqkd.io.

## Examples
```python
from odqkd.core.alphabet import BsmOutcome
from odqkd.quantum import bell_projector, ghz_state, measure

res = measure(ghz_state(2), bell_projector(BsmOutcome.PSI_PLUS, (0, 1), 2))
res.is_null  # True: φ+ has no ψ+ component
```
"""

from .measurement import (
    MeasurementOperator,
    MeasurementResult,
    apply_local,
    bell_projector,
    complement,
    embed_operator,
    local_outcome_distribution,
    measure,
    partial_trace,
    pauli_channel,
    projector,
)
from .states import (
    DensityOperator,
    PureState,
    basis_state,
    bell_state,
    computational_state,
    density,
    ghz_signed,
    ghz_state,
    maximally_mixed,
    permute_qubits,
    purity,
    tensor,
    werner_ghz,
)

__all__ = [
    "DensityOperator",
    "PureState",
    "basis_state",
    "bell_state",
    "computational_state",
    "density",
    "ghz_signed",
    "ghz_state",
    "maximally_mixed",
    "permute_qubits",
    "purity",
    "tensor",
    "werner_ghz",
    "MeasurementOperator",
    "MeasurementResult",
    "apply_local",
    "bell_projector",
    "complement",
    "embed_operator",
    "local_outcome_distribution",
    "measure",
    "partial_trace",
    "pauli_channel",
    "projector",
]
