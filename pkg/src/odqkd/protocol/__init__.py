"""
odqkd.protocol — Preparation alphabet, round transcripts and the sifting logic.

## Responsibilities
- Re-export the protocol alphabet (BB84 symbols, bases, relay outcomes, post-selected signs).
- Define the RoundRecord transcript and the SiftResult/ConferenceSiftResult outcomes.
- Implement the parity rules, equivalent measurements and per-round sifting for two-party and
  three-party conference modes.
- Verify every rule exhaustively against exact quantum projections (oracle).

## Public API
- records — RoundRecord, SiftResult, ConferenceSiftResult (pydantic v2).
- sifting — sigma_parity, tau_parity, povm_equivalent, equivalent_bsm, flip_decision,
  ghz_analyzer_equivalent, sift_decision, two_party_result, sift_round, conference_sift_round.
- oracle — fixtures and verify_* functions returning TableReport.

## Import DAG discipline
- Depends on: stdlib, numpy, pydantic, odqkd.core, odqkd.quantum (oracle only).
- Must not import odqkd.netsim, odqkd.io or odqkd.cli.

## Examples
```python
from odqkd.protocol import Bb84Symbol as S, BsmOutcome as B, RoundRecord, sift_round

rec = RoundRecord.from_round(0, [S.ZERO, S.ZERO, S.PLUS, S.MINUS], [B.PSI_PLUS] * 4, (0, 1))
sift_round(rec).bit_pair  # (0, 0)
```
"""

from odqkd.core.alphabet import (
    Basis,
    Bb84Symbol,
    BellSign,
    BsmOutcome,
    DiscardReason,
    GhzSign,
    outcome_from_value,
    symbol_from_value,
    symbols_in_basis,
)

from .oracle import TableReport, verify_all
from .records import ConferenceSiftResult, RoundRecord, SiftResult
from .sifting import (
    FlipRule,
    PovmEquivalent,
    SiftDecision,
    conference_sift_round,
    equivalent_bsm,
    flip_decision,
    ghz_analyzer_equivalent,
    post_selected_parity,
    povm_equivalent,
    sift_decision,
    sift_round,
    sigma_parity,
    tau_parity,
    two_party_result,
)

__all__ = [
    "Basis",
    "Bb84Symbol",
    "BellSign",
    "BsmOutcome",
    "DiscardReason",
    "GhzSign",
    "outcome_from_value",
    "symbol_from_value",
    "symbols_in_basis",
    "TableReport",
    "verify_all",
    "ConferenceSiftResult",
    "RoundRecord",
    "SiftResult",
    "FlipRule",
    "PovmEquivalent",
    "SiftDecision",
    "conference_sift_round",
    "equivalent_bsm",
    "flip_decision",
    "ghz_analyzer_equivalent",
    "post_selected_parity",
    "povm_equivalent",
    "sift_decision",
    "sift_round",
    "sigma_parity",
    "tau_parity",
    "two_party_result",
]
