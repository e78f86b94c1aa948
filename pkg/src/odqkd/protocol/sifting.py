"""
Sifting logic: parity rules, equivalent measurements and the per-round key decision.

Responsibilities
- Parity helpers: sigma_parity over sign strings and the τ parity of a round.
- Equivalent-measurement rules: POVM seen by a GHZ qubit (auxiliary side), equivalent BSM
  between two communication users, equivalent GHZ analyzer among three, and the flip rule.
- Round sifting for two-party (sift_round) and three-party conference (conference_sift_round)
  modes, built on sift_decision, which uses public announcements only.

Notes
- Closed forms replace table lookups: every rule reduces to the parity of the number of
  minus signs (|−⟩ auxiliary preparations, ψ− relay outcomes, φ−/φ3− post-selected states).
  The literal tables live in odqkd.protocol.oracle and are checked against these rules.
- Discard priority: relay failure, then auxiliary user not in X, then basis mismatch.
- The last-listed communication user performs the flip (the second user in two-party mode).
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from odqkd.core.alphabet import (
    Basis,
    Bb84Symbol,
    BellSign,
    BsmOutcome,
    DiscardReason,
    GhzSign,
    symbol_from_value,
)
from odqkd.core.errors import ContractViolation, ParameterError
from odqkd.core.typing import ParityBit

from .records import ConferenceSiftResult, RoundRecord, SiftResult

__all__ = [
    "FlipRule",
    "PovmEquivalent",
    "SiftDecision",
    "sigma_parity",
    "tau_parity",
    "povm_equivalent",
    "equivalent_bsm",
    "flip_decision",
    "ghz_analyzer_equivalent",
    "post_selected_parity",
    "sift_decision",
    "two_party_result",
    "sift_round",
    "conference_sift_round",
]

_MINUS_CHARS = frozenset({"-", "−"})


def _parity(count: int) -> ParityBit:
    return 1 if count % 2 else 0


def sigma_parity(signs: str | Iterable[Bb84Symbol]) -> ParityBit:
    """
    Parity of the number of minus signs.

    Args:
        signs (str | Iterable[Bb84Symbol]): String over {"+", "-", "−"} or X-basis symbols.

    Returns:
        ParityBit: 0 for an even count of minus signs (including none), 1 for odd.

    Raises:
        ParameterError: If a character is not a sign.

    Examples:
        >>> sigma_parity("++"), sigma_parity("+-"), sigma_parity("--"), sigma_parity("")
        (0, 1, 0, 0)
    """
    if isinstance(signs, str):
        bad = set(signs) - _MINUS_CHARS - {"+"}
        if bad:
            raise ParameterError(f"sign string may contain only '+' and '-', got {signs!r}")
        return _parity(sum(ch in _MINUS_CHARS for ch in signs))
    return _parity(sum(s.is_minus for s in signs))


def _require_x(symbols: Iterable[Bb84Symbol | str]) -> list[Bb84Symbol]:
    out = [symbol_from_value(s) for s in symbols]
    for s in out:
        if s.basis is not Basis.X:
            raise ContractViolation(f"auxiliary symbol must be in the X basis, got {s.value}")
    return out


def _require_success(outcomes: Iterable[BsmOutcome]) -> list[BsmOutcome]:
    out = list(outcomes)
    if any(not o.successful for o in out):
        raise ContractViolation("equivalent measurements are defined for successful BSMs only")
    return out


def post_selected_parity(
    aux_symbols: Sequence[Bb84Symbol | str], aux_bsm: Sequence[BsmOutcome]
) -> ParityBit:
    """
    Sign of the state the auxiliary announcements post-select on the communication side.

    Returns 0 for |0…0⟩ + |1…1⟩ and 1 for |0…0⟩ − |1…1⟩: the parity of '−' preparations
    plus ψ− outcomes over the auxiliary users.

    Raises:
        ParameterError: If the sequences differ in length.
        ContractViolation: If a symbol is in Z or an outcome is FAILURE.
    """
    if len(aux_symbols) != len(aux_bsm):
        raise ParameterError(
            f"auxiliary symbols ({len(aux_symbols)}) and BSM results ({len(aux_bsm)}) differ"
        )
    symbols = _require_x(aux_symbols)
    outcomes = _require_success(aux_bsm)
    return _parity(sum(s.is_minus for s in symbols) + sum(o.is_minus for o in outcomes))


def tau_parity(
    aux_symbols: Sequence[Bb84Symbol | str],
    aux_bsm: Sequence[BsmOutcome],
    comm_bsm: Sequence[BsmOutcome],
) -> ParityBit:
    """
    τ = σ(χ′ ⊕ υ̃) ⊕ υ_1 ⊕ υ_2: selects φ+ (0) or φ− (1) as the equivalent BSM result.

    Args:
        aux_symbols (Sequence[Bb84Symbol | str]): X-basis symbols of the auxiliary users.
        aux_bsm (Sequence[BsmOutcome]): Relay outcomes of the auxiliary users, aligned.
        comm_bsm (Sequence[BsmOutcome]): Relay outcomes of the communication users (two, or
            three in conference mode, where τ is the analyzer sign).

    Returns:
        ParityBit: 1 when X-basis bits must be corrected by a flip.

    Raises:
        ParameterError: If aux_symbols and aux_bsm differ in length.
        ContractViolation: If any outcome is FAILURE or an auxiliary symbol is in Z.

    Examples:
        >>> from odqkd.core.alphabet import BsmOutcome as B
        >>> tau_parity("++", [B.PSI_PLUS, B.PSI_PLUS], [B.PSI_PLUS, B.PSI_MINUS])
        1
    """
    aux = post_selected_parity(aux_symbols, aux_bsm)
    comm = _require_success(comm_bsm)
    return _parity(aux + sum(o.is_minus for o in comm))


class PovmEquivalent(NamedTuple):
    """Effective POVM element `weight · |state⟩⟨state|` on a GHZ qubit."""

    state: Bb84Symbol
    weight: float

    def matrix(self) -> np.ndarray:
        sign = -1.0 if self.state.is_minus else 1.0
        ket = np.array([1.0, sign], dtype=np.complex128) / np.sqrt(2.0)
        return self.weight * np.outer(ket, ket.conj())


def povm_equivalent(aux_symbol: Bb84Symbol | str, bsm: BsmOutcome) -> PovmEquivalent:
    """
    POVM on a GHZ qubit induced by a successful BSM with a known X-basis auxiliary photon.

    Args:
        aux_symbol (Bb84Symbol | str): PLUS or MINUS.
        bsm (BsmOutcome): PSI_PLUS or PSI_MINUS.

    Returns:
        PovmEquivalent: |+⟩⟨+|/2 when the minus count is even, |−⟩⟨−|/2 when odd.

    Raises:
        ContractViolation: If the symbol is in Z or the BSM failed.

    Examples:
        >>> from odqkd.core.alphabet import BsmOutcome
        >>> povm_equivalent("+", BsmOutcome.PSI_MINUS).state.value
        'A'
    """
    (symbol,) = _require_x([aux_symbol])
    (outcome,) = _require_success([bsm])
    parity = _parity(symbol.is_minus + outcome.is_minus)
    return PovmEquivalent(Bb84Symbol.from_bit(Basis.X, parity), 0.5)


def equivalent_bsm(bell_a: BellSign, bsm1: BsmOutcome, bsm2: BsmOutcome) -> BellSign:
    """
    Equivalent Bell measurement between two communication users.

    φ+ iff the count of {bell_a = φ−, bsm1 = ψ−, bsm2 = ψ−} is even.

    Raises:
        ContractViolation: If either BSM failed.
    """
    outcomes = _require_success([bsm1, bsm2])
    return BellSign.from_parity(bell_a.parity + sum(o.is_minus for o in outcomes))


def ghz_analyzer_equivalent(
    ghz_a: GhzSign, bsm1: BsmOutcome, bsm2: BsmOutcome, bsm3: BsmOutcome
) -> GhzSign:
    """
    Equivalent GHZ-analyzer result among three communication users.

    The post-selected sign flips iff an odd number of the three BSMs gave ψ−.

    Raises:
        ContractViolation: If any BSM failed.
    """
    outcomes = _require_success([bsm1, bsm2, bsm3])
    return GhzSign.from_parity(ghz_a.parity + sum(o.is_minus for o in outcomes))


def flip_decision(basis: Basis, equivalent: BellSign | GhzSign) -> bool:
    """Flip only for X-basis rounds whose equivalent result carries a minus sign."""
    return basis is Basis.X and equivalent.parity == 1


# Replaceable in the oracle to inject faults.
FlipRule = Callable[[Basis, BellSign | GhzSign], bool]


@dataclass(frozen=True, slots=True)
class SiftDecision:
    """
    Public part of sifting, computable from the broadcast log alone.

    Attributes:
        kept (bool): Whether the round contributes key or test bits.
        basis (Basis | None): Common basis of the communication users when kept.
        aux_parity (int | None): Sign post-selected by the auxiliary announcements.
        tau (int | None): Equivalent-measurement sign (BSM in two-party mode, analyzer in
            conference mode).
        flip_user (int | None): User who flips their bit.
        discard_reason (DiscardReason | None): Why the round was discarded.
    """

    kept: bool
    basis: Basis | None = None
    aux_parity: int | None = None
    tau: int | None = None
    flip_user: int | None = None
    discard_reason: DiscardReason | None = None


def sift_decision(
    bsm: Sequence[BsmOutcome],
    comm_users: Sequence[int],
    comm_bases: Sequence[Basis],
    aux_symbols: Sequence[Bb84Symbol | None],
    flip_rule: FlipRule = flip_decision,
) -> SiftDecision:
    """
    Decide keep/discard, τ and the flipping user from announcements only.

    Args:
        bsm (Sequence[BsmOutcome]): Relay announcement per user.
        comm_users (Sequence[int]): Communication users (2 or 3).
        comm_bases (Sequence[Basis]): Announced bases aligned with comm_users.
        aux_symbols (Sequence[Bb84Symbol | None]): Announced X symbols of the remaining users in
            ascending order (None for users who announced nothing).
        flip_rule (FlipRule): Maps (basis, equivalent sign) to whether to flip.

    Returns:
        SiftDecision: Outcome of the public part of sifting.

    Raises:
        ParameterError: If lengths are inconsistent.
    """
    n = len(bsm)
    aux_users = [i for i in range(n) if i not in comm_users]
    if len(aux_symbols) != len(aux_users) or len(comm_bases) != len(comm_users):
        raise ParameterError("announcements do not match the user roles")
    if any(not o.successful for o in bsm):
        return SiftDecision(kept=False, discard_reason=DiscardReason.BSM_FAILURE)
    if any(s is None for s in aux_symbols):
        return SiftDecision(kept=False, discard_reason=DiscardReason.AUX_NOT_X)
    if len(set(comm_bases)) != 1:
        return SiftDecision(kept=False, discard_reason=DiscardReason.BASIS_MISMATCH)
    symbols = [s for s in aux_symbols if s is not None]
    aux_bsm = [bsm[u] for u in aux_users]
    aux_parity = post_selected_parity(symbols, aux_bsm)
    tau = tau_parity(symbols, aux_bsm, [bsm[u] for u in comm_users])
    basis = comm_bases[0]
    sign: BellSign | GhzSign = (
        BellSign.from_parity(tau) if len(comm_users) == 2 else GhzSign.from_parity(tau)
    )
    flip = flip_rule(basis, sign)
    return SiftDecision(
        kept=True,
        basis=basis,
        aux_parity=aux_parity,
        tau=tau,
        flip_user=comm_users[-1] if flip else None,
    )


def _decide(record: RoundRecord, flip_rule: FlipRule) -> SiftDecision:
    return sift_decision(
        record.bsm,
        record.comm_users,
        record.announced_bases,
        record.announced_aux_symbols,
        flip_rule,
    )


def two_party_result(
    round_id: int,
    preparations: Sequence[Bb84Symbol],
    comm_users: Sequence[int],
    decision: SiftDecision,
) -> SiftResult:
    """
    Apply a public sifting decision to the communication users' own preparations.

    The bit of `decision.flip_user` is inverted; everyone else keeps the prepared bit.
    """
    if not decision.kept:
        return SiftResult(round_id=round_id, kept=False, discard_reason=decision.discard_reason)
    a, b = (preparations[u].bit ^ (u == decision.flip_user) for u in comm_users)
    return SiftResult(
        round_id=round_id,
        kept=True,
        basis=decision.basis,
        tau=decision.tau,
        flip_user=decision.flip_user,
        bit_pair=(a, b),
    )


def sift_round(record: RoundRecord, flip_rule: FlipRule = flip_decision) -> SiftResult:
    """
    Sift a two-party round into a bit pair or a discard reason.

    Z-basis bits are kept as prepared; in X rounds with τ = 1 the second communication user
    flips their bit.

    Raises:
        ContractViolation: If the record names three communication users.

    Examples:
        >>> from odqkd.core.alphabet import Bb84Symbol as S, BsmOutcome as B
        >>> rec = RoundRecord.from_round(
        ...     0, [S.MINUS, S.PLUS, S.PLUS, S.PLUS], [B.PSI_PLUS] * 3 + [B.PSI_MINUS], (0, 1)
        ... )
        >>> sift_round(rec).bit_pair
        (1, 1)
    """
    if len(record.comm_users) != 2:
        raise ContractViolation("sift_round() handles two communication users")
    d = _decide(record, flip_rule)
    return two_party_result(record.round_id, record.preparations, record.comm_users, d)


def conference_sift_round(
    record: RoundRecord, flip_rule: FlipRule = flip_decision
) -> ConferenceSiftResult:
    """
    Sift a three-party conference round.

    The auxiliary announcements post-select φ3±; combined with the three communication-side
    BSMs this gives the equivalent GHZ-analyzer result. Z rounds are key rounds with no
    correction; in X rounds with analyzer φ3− the last-listed user flips so the three bits have
    even parity.

    Raises:
        ContractViolation: If the record does not name three communication users.
    """
    if len(record.comm_users) != 3:
        raise ContractViolation("conference_sift_round() handles three communication users")
    d = _decide(record, flip_rule)
    if not d.kept:
        return ConferenceSiftResult(
            round_id=record.round_id, kept=False, discard_reason=d.discard_reason
        )
    assert d.aux_parity is not None and d.basis is not None
    post = GhzSign.from_parity(d.aux_parity)
    analyzer = ghz_analyzer_equivalent(post, *record.comm_bsm)
    bits = [record.preparations[u].bit for u in record.comm_users]
    flip = flip_rule(d.basis, analyzer)
    if flip:
        bits[2] ^= 1
    return ConferenceSiftResult(
        round_id=record.round_id,
        kept=True,
        basis=d.basis,
        post_selected=post,
        analyzer=analyzer,
        flip_user=record.comm_users[2] if flip else None,
        bits=(bits[0], bits[1], bits[2]),
    )
