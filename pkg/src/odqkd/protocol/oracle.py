"""
Exhaustive quantum oracle for the sifting rules.

Every rule in odqkd.protocol.sifting is checked twice: against a literal fixture of the
published correspondence tables, and against exact projections computed with odqkd.quantum.
The end-to-end checks enumerate every preparation/BSM combination of a small network and
verify that each physically possible kept round yields correlated bits.

Fixtures
- AUX_POVM_ROWS (4): auxiliary X symbol × BSM outcome → POVM on the GHZ qubit.
- EQUIVALENT_BSM_ROWS (8): post-selected Bell sign × two relay outcomes → equivalent BSM.
- FLIP_ROWS (2): basis → flip for (φ+, φ−).
- GHZ_ANALYZER_ROWS (16): post-selected GHZ sign × three relay outcomes → analyzer result,
  as eight printed rows with their sign-swapped companions.

Fault injection
- Each verifier takes the rule under test as an argument (defaulting to the production rule),
  so tests and the CLI can plant a faulty rule and observe the reported mismatch.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from functools import cache

import numpy as np

from odqkd.core.alphabet import Basis, Bb84Symbol, BellSign, BsmOutcome, GhzSign
from odqkd.core.constants import NULL_PROBABILITY
from odqkd.quantum.measurement import bell_projector, embed_operator, measure, partial_trace
from odqkd.quantum.states import (
    DensityOperator,
    PureState,
    basis_state,
    bell_state,
    density,
    ghz_signed,
    ghz_state,
    permute_qubits,
    tensor,
)

from .records import RoundRecord
from .sifting import (
    FlipRule,
    PovmEquivalent,
    conference_sift_round,
    equivalent_bsm,
    flip_decision,
    ghz_analyzer_equivalent,
    povm_equivalent,
    sift_round,
)

__all__ = [
    "TableReport",
    "AUX_POVM_ROWS",
    "EQUIVALENT_BSM_ROWS",
    "FLIP_ROWS",
    "GHZ_ANALYZER_ROWS",
    "verify_aux_povm",
    "verify_equivalent_bsm",
    "verify_flip",
    "verify_ghz_analyzer",
    "verify_end_to_end",
    "verify_conference_end_to_end",
    "verify_all",
]

logger = logging.getLogger(__name__)

_P, _M = Bb84Symbol.PLUS, Bb84Symbol.MINUS
_SP, _SM = BsmOutcome.PSI_PLUS, BsmOutcome.PSI_MINUS
_FP, _FM = BellSign.PHI_PLUS, BellSign.PHI_MINUS
_GP, _GM = GhzSign.PHI3_PLUS, GhzSign.PHI3_MINUS
_SUCCESS = (_SP, _SM)
_ALL_SYMBOLS = tuple(Bb84Symbol)


# (auxiliary state, BSM result, state of the POVM element with weight 1/2)
AUX_POVM_ROWS: tuple[tuple[Bb84Symbol, BsmOutcome, Bb84Symbol], ...] = (
    (_P, _SM, _M),
    (_M, _SM, _P),
    (_P, _SP, _P),
    (_M, _SP, _M),
)

# (post-selected Bell state, BSM 1, BSM 2, equivalent BSM)
EQUIVALENT_BSM_ROWS: tuple[tuple[BellSign, BsmOutcome, BsmOutcome, BellSign], ...] = (
    (_FP, _SP, _SP, _FP),
    (_FP, _SP, _SM, _FM),
    (_FP, _SM, _SP, _FM),
    (_FP, _SM, _SM, _FP),
    (_FM, _SP, _SP, _FM),
    (_FM, _SP, _SM, _FP),
    (_FM, _SM, _SP, _FP),
    (_FM, _SM, _SM, _FM),
)

# (basis, flip for φ+, flip for φ−)
FLIP_ROWS: tuple[tuple[Basis, bool, bool], ...] = (
    (Basis.Z, False, False),
    (Basis.X, False, True),
)

_GHZ_PRINTED: tuple[tuple[BsmOutcome, BsmOutcome, BsmOutcome, GhzSign], ...] = (
    (_SP, _SP, _SP, _GP),
    (_SP, _SP, _SM, _GM),
    (_SP, _SM, _SP, _GM),
    (_SP, _SM, _SM, _GP),
    (_SM, _SP, _SP, _GM),
    (_SM, _SP, _SM, _GP),
    (_SM, _SM, _SP, _GP),
    (_SM, _SM, _SM, _GM),
)


def _swap(sign: GhzSign) -> GhzSign:
    return GhzSign.from_parity(sign.parity + 1)


# (post-selected GHZ state, BSM 1, BSM 2, BSM 3, analyzer result); the printed result is for
# φ3+, and its companion row (id suffixed with ') swaps both signs.
GHZ_ANALYZER_ROWS: tuple[tuple[str, GhzSign, BsmOutcome, BsmOutcome, BsmOutcome, GhzSign], ...]
GHZ_ANALYZER_ROWS = tuple(
    row
    for i, (b1, b2, b3, out) in enumerate(_GHZ_PRINTED, start=1)
    for row in ((f"{i}", _GP, b1, b2, b3, out), (f"{i}'", _GM, b1, b2, b3, _swap(out)))
)


@dataclass(frozen=True)
class TableReport:
    """
    Result of checking one rule family.

    Attributes:
        name (str): Rule family ("aux-povm", "equivalent-bsm", "flip", "ghz-analyzer",
            "end-to-end", "conference-end-to-end").
        rows_checked (int): Number of rows (or enumerated rounds) examined.
        mismatches (tuple[str, ...]): Human-readable description of each failing row.
        details (dict[str, int]): Extra counters (kept rounds, impossible rounds, ...).
    """

    name: str
    rows_checked: int
    mismatches: tuple[str, ...] = ()
    details: dict[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = "".join(f" {k}={v}" for k, v in sorted(self.details.items()))
        return f"{self.name}: {status} ({self.rows_checked} rows checked{extra})"


# ---------------------------------------------------------------------------------------------
# Exact physics
# ---------------------------------------------------------------------------------------------


def _oracle_aux_povm(symbol: Bb84Symbol, outcome: BsmOutcome) -> tuple[float, DensityOperator]:
    """Weight and normalized state of tr_aux[Π (I ⊗ |α⟩⟨α|)] on the GHZ qubit."""
    aux_proj = embed_operator(density(basis_state(symbol)).matrix, (1,), 2)
    pi = bell_projector(outcome, (0, 1), 2).matrix
    op = aux_proj @ pi @ aux_proj
    weight = float(np.trace(op).real)
    reduced = partial_trace(DensityOperator(2, op / weight), {0})
    return weight, reduced


def _oracle_swap(source: PureState, outcomes: tuple[BsmOutcome, ...]) -> int | None:
    """
    Sign t of the user-side state |0…0⟩ ± |1…1⟩ compatible with the relay outcomes.

    The source occupies qubits 0..k-1, the trial user state qubits k..2k-1, and relay j
    projects (j, k + j) onto ψ±. Returns None unless exactly one sign survives.
    """
    k = source.num_qubits
    surviving = []
    for t in (0, 1):
        state = density(tensor(source, ghz_signed(k, t)))  # type: ignore[arg-type]
        prob = 1.0
        for j, outcome in enumerate(outcomes):
            res = measure(state, bell_projector(outcome, (j, k + j), 2 * k))
            prob *= res.probability
            if res.post_state is None:
                break
            state = res.post_state
        if prob > NULL_PROBABILITY:
            surviving.append(t)
    return surviving[0] if len(surviving) == 1 else None


def _oracle_flip(basis: Basis, sign: BellSign) -> bool | None:
    """Whether the compatible preparation pairs of φ± have differing bits (None if mixed)."""
    target = ghz_signed(2, sign.parity)
    relations = set()
    for s1, s2 in itertools.product(_ALL_SYMBOLS, repeat=2):
        if s1.basis is not basis or s2.basis is not basis:
            continue
        pair = tensor(basis_state(s1), basis_state(s2))
        assert isinstance(pair, PureState)
        if abs(target.overlap(pair)) ** 2 > NULL_PROBABILITY:
            relations.add(s1.bit != s2.bit)
    return relations.pop() if len(relations) == 1 else None


# ---------------------------------------------------------------------------------------------
# Table verifiers
# ---------------------------------------------------------------------------------------------


def verify_aux_povm(
    rule: Callable[[Bb84Symbol, BsmOutcome], PovmEquivalent] = povm_equivalent,
) -> TableReport:
    """Check the auxiliary POVM correspondence (4 rows)."""
    mismatches = []
    for i, (symbol, outcome, expected) in enumerate(AUX_POVM_ROWS, start=1):
        weight, reduced = _oracle_aux_povm(symbol, outcome)
        target = density(basis_state(expected)).matrix
        if abs(weight - 0.5) > 1e-12 or not np.allclose(reduced.matrix, target, atol=1e-10):
            mismatches.append(f"row {i}: oracle disagrees with fixture for {symbol.value}")
        got = rule(symbol, outcome)
        if got.state is not expected or abs(got.weight - 0.5) > 1e-15:
            mismatches.append(
                f"row {i}: rule gave {got.state.value}/{got.weight} for "
                f"({symbol.value}, {outcome.value}), expected {expected.value}/0.5"
            )
    return TableReport("aux-povm", len(AUX_POVM_ROWS), tuple(mismatches))


def verify_equivalent_bsm(
    rule: Callable[[BellSign, BsmOutcome, BsmOutcome], BellSign] = equivalent_bsm,
) -> TableReport:
    """Check the equivalent BSM between two communication users (8 rows)."""
    mismatches = []
    for i, (bell_a, b1, b2, expected) in enumerate(EQUIVALENT_BSM_ROWS, start=1):
        oracle = _oracle_swap(ghz_signed(2, bell_a.parity), (b1, b2))
        if oracle != expected.parity:
            mismatches.append(f"row {i}: oracle gives sign {oracle}, fixture {expected.value}")
        got = rule(bell_a, b1, b2)
        if got is not expected:
            mismatches.append(
                f"row {i}: rule gave {got.value} for ({bell_a.value}, {b1.value}, {b2.value}), "
                f"expected {expected.value}"
            )
    return TableReport("equivalent-bsm", len(EQUIVALENT_BSM_ROWS), tuple(mismatches))


def verify_flip(rule: FlipRule = flip_decision) -> TableReport:
    """Check the flip rule for both bases and both equivalent results (2 rows)."""
    mismatches = []
    for i, (basis, flip_plus, flip_minus) in enumerate(FLIP_ROWS, start=1):
        for sign, expected in ((_FP, flip_plus), (_FM, flip_minus)):
            oracle = _oracle_flip(basis, sign)
            if oracle is not expected:
                mismatches.append(f"row {i}: oracle gives {oracle} for {basis.value}/{sign.value}")
            got = rule(basis, sign)
            if got is not expected:
                mismatches.append(
                    f"row {i}: rule gave flip={got} for ({basis.value}, {sign.value}), "
                    f"expected flip={expected}"
                )
    return TableReport("flip", len(FLIP_ROWS), tuple(mismatches))


def verify_ghz_analyzer(
    rule: Callable[
        [GhzSign, BsmOutcome, BsmOutcome, BsmOutcome], GhzSign
    ] = ghz_analyzer_equivalent,
) -> TableReport:
    """Check the equivalent GHZ analyzer among three communication users (16 rows)."""
    mismatches = []
    for row_id, ghz_a, b1, b2, b3, expected in GHZ_ANALYZER_ROWS:
        oracle = _oracle_swap(ghz_signed(3, ghz_a.parity), (b1, b2, b3))
        if oracle != expected.parity:
            mismatches.append(f"row {row_id}: oracle gives sign {oracle}, fixture {expected.value}")
        got = rule(ghz_a, b1, b2, b3)
        if got is not expected:
            mismatches.append(
                f"row {row_id}: rule gave {got.value} for "
                f"({ghz_a.value}, {b1.value}, {b2.value}, {b3.value}), expected {expected.value}"
            )
    return TableReport("ghz-analyzer", len(GHZ_ANALYZER_ROWS), tuple(mismatches))


# ---------------------------------------------------------------------------------------------
# End-to-end enumeration
# ---------------------------------------------------------------------------------------------


@cache
def _bsm_vector(outcomes: tuple[BsmOutcome, ...]) -> PureState:
    """Product of ψ± on pairs (j, n + j), in register order (sources first, then users)."""
    n = len(outcomes)
    vec = bell_state(outcomes[0].value)  # type: ignore[arg-type]
    for o in outcomes[1:]:
        nxt = tensor(vec, bell_state(o.value))  # type: ignore[arg-type]
        assert isinstance(nxt, PureState)
        vec = nxt
    # current order: (g0, p0, g1, p1, ...); target: (g0, ..., g_{n-1}, p0, ..., p_{n-1})
    order = [2 * j for j in range(n)] + [2 * j + 1 for j in range(n)]
    return permute_qubits(vec, order)


def _joint_probability(preps: tuple[Bb84Symbol, ...], outcomes: tuple[BsmOutcome, ...]) -> float:
    """Born probability of all relay outcomes given the users' photons and a GHZ source."""
    photons = basis_state(preps[0])
    for s in preps[1:]:
        nxt = tensor(photons, basis_state(s))
        assert isinstance(nxt, PureState)
        photons = nxt
    full = tensor(ghz_state(len(preps)), photons)
    assert isinstance(full, PureState)
    return abs(_bsm_vector(outcomes).overlap(full)) ** 2


def verify_end_to_end(flip_rule: FlipRule = flip_decision) -> TableReport:
    """
    Enumerate a four-user network with communication users (0, 1).

    Rounds: 4² communication preparations × 2² auxiliary X symbols × 2⁴ relay outcomes. Every
    round that occurs with nonzero probability and matching bases must sift to equal bits.
    """
    comm = (0, 1)
    mismatches = []
    kept = impossible = 0
    combos = itertools.product(
        _ALL_SYMBOLS, _ALL_SYMBOLS, (_P, _M), (_P, _M), itertools.product(_SUCCESS, repeat=4)
    )
    count = 0
    for s0, s1, s2, s3, outcomes in combos:
        count += 1
        preps = (s0, s1, s2, s3)
        if _joint_probability(preps, outcomes) <= NULL_PROBABILITY:
            impossible += 1
            continue
        rec = RoundRecord.from_round(count - 1, preps, outcomes, comm)
        res = sift_round(rec, flip_rule)
        if not res.kept:
            continue
        kept += 1
        if res.error:
            mismatches.append(
                "round "
                + " ".join(s.value for s in preps)
                + " | "
                + " ".join(o.value for o in outcomes)
                + f": bits {res.bit_pair}"
            )
    logger.debug("end-to-end: %d rounds, %d kept, %d impossible", count, kept, impossible)
    return TableReport(
        "end-to-end",
        count,
        tuple(mismatches),
        {"kept": kept, "impossible": impossible},
    )


def verify_conference_end_to_end(flip_rule: FlipRule = flip_decision) -> TableReport:
    """
    Enumerate a five-user conference with communication users (0, 1, 2).

    Z rounds must give three equal bits; X rounds must have even parity after the flip.
    """
    comm = (0, 1, 2)
    mismatches = []
    kept = impossible = 0
    combos = itertools.product(
        itertools.product(_ALL_SYMBOLS, repeat=3),
        itertools.product((_P, _M), repeat=2),
        itertools.product(_SUCCESS, repeat=5),
    )
    count = 0
    for comm_preps, aux_preps, outcomes in combos:
        count += 1
        preps = comm_preps + aux_preps
        if _joint_probability(preps, outcomes) <= NULL_PROBABILITY:
            impossible += 1
            continue
        res = conference_sift_round(
            RoundRecord.from_round(count - 1, preps, outcomes, comm), flip_rule
        )
        if not res.kept or res.bits is None:
            continue
        kept += 1
        bad = len(set(res.bits)) != 1 if res.basis is Basis.Z else res.parity_error
        if bad:
            mismatches.append(
                " ".join(s.value for s in preps)
                + " | "
                + " ".join(o.value for o in outcomes)
                + f": bits {res.bits}"
            )
    return TableReport(
        "conference-end-to-end",
        count,
        tuple(mismatches),
        {"kept": kept, "impossible": impossible},
    )


def verify_all(flip_rule: FlipRule = flip_decision) -> list[TableReport]:
    """Run every table check and both end-to-end enumerations."""
    reports = [
        verify_aux_povm(),
        verify_equivalent_bsm(),
        verify_flip(flip_rule),
        verify_ghz_analyzer(),
        verify_end_to_end(flip_rule),
        verify_conference_end_to_end(flip_rule),
    ]
    for r in reports:
        if not r.passed:
            logger.warning("%s: %d mismatches", r.name, len(r.mismatches))
    return reports

