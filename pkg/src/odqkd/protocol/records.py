"""
Pydantic v2 models for the per-round transcript and the sifting outcomes.

Responsibilities
- RoundRecord: preparations, relay announcements and the public announcements of one round.
- SiftResult / ConferenceSiftResult: kept/discarded outcome with bits and flip metadata.
- Normalize enum-like fields from their wire spellings ("H", "psi+", "fail", "Z", ...).

Notes
- Models are frozen; `model_dump(mode="json")` yields the record-stream line format.
- Auxiliary users are every user outside `comm_users`, in ascending index order. An auxiliary
  user who prepared a Z-basis symbol announces nothing (encoded as null).
- Consistency between preparations and announcements is enforced at construction, so a record
  read back from a stream cannot claim an announcement its preparations do not support.
"""

from __future__ import annotations

from collections.abc import Sequence
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from odqkd.core.alphabet import (
    Basis,
    Bb84Symbol,
    BsmOutcome,
    DiscardReason,
    GhzSign,
    outcome_from_value,
    symbol_from_value,
)
from odqkd.core.constants import MAX_STATE_QUBITS
from odqkd.core.errors import RecordValidationError

__all__ = [
    "RoundRecord",
    "SiftResult",
    "ConferenceSiftResult",
]


class RoundRecord(BaseModel):
    """
    Transcript of one protocol round.

    Attributes:
        round_id (int): Sequence number (>= 0).
        preparations (tuple[Bb84Symbol, ...]): Symbol prepared by each user, indexed by user.
        bsm (tuple[BsmOutcome, ...]): Announcement of each user's relay, indexed by user.
        comm_users (tuple[int, ...]): Communication users (2 or 3 distinct indices).
        announced_bases (tuple[Basis, ...]): Basis announced by each communication user,
            aligned with comm_users.
        announced_aux_symbols (tuple[Bb84Symbol | None, ...]): X-basis symbol announced by each
            auxiliary user in ascending index order; None when the user prepared in Z.

    Raises:
        pydantic.ValidationError: Wrapping RecordValidationError when indices, lengths or
            announcements are inconsistent.

    Examples:
        >>> from odqkd.core.alphabet import Bb84Symbol as S, BsmOutcome as B
        >>> preps = [S.ZERO, S.ZERO, S.PLUS, S.PLUS]
        >>> r = RoundRecord.from_round(0, preps, [B.PSI_PLUS] * 4, (0, 1))
        >>> [b.value for b in r.announced_bases], [s.value for s in r.announced_aux_symbols]
        (['Z', 'Z'], ['D', 'D'])
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    round_id: int = Field(ge=0)
    preparations: tuple[Bb84Symbol, ...]
    bsm: tuple[BsmOutcome, ...]
    comm_users: tuple[int, ...]
    announced_bases: tuple[Basis, ...]
    announced_aux_symbols: tuple[Bb84Symbol | None, ...]

    @field_validator("preparations", mode="before")
    @classmethod
    def _normalize_preparations(cls, v: Any) -> Any:
        if isinstance(v, Sequence) and not isinstance(v, str):
            try:
                return tuple(symbol_from_value(s) for s in v)
            except ValueError as e:
                raise RecordValidationError(str(e)) from e
        return v

    @field_validator("bsm", mode="before")
    @classmethod
    def _normalize_bsm(cls, v: Any) -> Any:
        if isinstance(v, Sequence) and not isinstance(v, str):
            try:
                return tuple(outcome_from_value(o) for o in v)
            except ValueError as e:
                raise RecordValidationError(str(e)) from e
        return v

    @field_validator("announced_aux_symbols", mode="before")
    @classmethod
    def _normalize_aux(cls, v: Any) -> Any:
        if isinstance(v, Sequence) and not isinstance(v, str):
            try:
                return tuple(None if s is None else symbol_from_value(s) for s in v)
            except ValueError as e:
                raise RecordValidationError(str(e)) from e
        return v

    @model_validator(mode="after")
    def _validate_round(self) -> RoundRecord:
        n = len(self.preparations)
        if not 2 <= n <= MAX_STATE_QUBITS:
            raise RecordValidationError(f"user count must lie in 2..{MAX_STATE_QUBITS}, got {n}")
        if len(self.bsm) != n:
            raise RecordValidationError(f"expected {n} relay announcements, got {len(self.bsm)}")
        c = len(self.comm_users)
        if c not in (2, 3):
            raise RecordValidationError(f"comm_users must name 2 or 3 users, got {c}")
        if len(set(self.comm_users)) != c:
            raise RecordValidationError(f"comm_users must be distinct, got {self.comm_users}")
        if any(u < 0 or u >= n for u in self.comm_users):
            raise RecordValidationError(f"comm_users {self.comm_users} out of range for {n} users")
        if len(self.announced_bases) != c:
            raise RecordValidationError("announced_bases must align with comm_users")
        for u, basis in zip(self.comm_users, self.announced_bases, strict=True):
            if self.preparations[u].basis is not basis:
                raise RecordValidationError(
                    f"user {u} announced basis {basis.value} but prepared "
                    f"{self.preparations[u].value}"
                )
        aux = self.aux_users
        if len(self.announced_aux_symbols) != len(aux):
            raise RecordValidationError(
                f"expected {len(aux)} auxiliary announcements, "
                f"got {len(self.announced_aux_symbols)}"
            )
        for u, sym in zip(aux, self.announced_aux_symbols, strict=True):
            if sym is not None and sym.basis is not Basis.X:
                raise RecordValidationError(f"auxiliary user {u} announced Z-basis symbol")
            prepared = self.preparations[u]
            expected = prepared if prepared.basis is Basis.X else None
            if sym is not expected:
                raise RecordValidationError(
                    f"auxiliary user {u} announcement {sym} does not match preparation"
                )
        return self

    @property
    def num_users(self) -> int:
        return len(self.preparations)

    @property
    def aux_users(self) -> tuple[int, ...]:
        """Users outside comm_users, ascending."""
        return tuple(i for i in range(len(self.preparations)) if i not in self.comm_users)

    @property
    def comm_bsm(self) -> tuple[BsmOutcome, ...]:
        """Relay outcomes of the communication users, aligned with comm_users."""
        return tuple(self.bsm[u] for u in self.comm_users)

    @property
    def aux_bsm(self) -> tuple[BsmOutcome, ...]:
        return tuple(self.bsm[u] for u in self.aux_users)

    @classmethod
    def from_round(
        cls,
        round_id: int,
        preparations: Sequence[Bb84Symbol | str],
        bsm: Sequence[BsmOutcome | str],
        comm_users: Sequence[int],
    ) -> RoundRecord:
        """Build a record deriving the public announcements from the preparations."""
        preps = tuple(symbol_from_value(s) for s in preparations)
        comm = tuple(int(u) for u in comm_users)
        aux = [i for i in range(len(preps)) if i not in comm]
        return cls(
            round_id=round_id,
            preparations=preps,
            bsm=tuple(outcome_from_value(o) for o in bsm),
            comm_users=comm,
            announced_bases=tuple(preps[u].basis for u in comm if 0 <= u < len(preps)),
            announced_aux_symbols=tuple(
                preps[u] if preps[u].basis is Basis.X else None for u in aux
            ),
        )

    def for_comm_users(self, comm_users: Sequence[int]) -> RoundRecord:
        """
        Re-derive the announcements for a different set of communication users.

        The preparations and relay outcomes are unchanged; only the roles (and therefore the
        public announcements) differ. This is how a destination chosen after the measurements
        reuses the same raw data.
        """
        return RoundRecord.from_round(self.round_id, self.preparations, self.bsm, comm_users)


class SiftResult(BaseModel):
    """
    Outcome of sifting a two-party round.

    Attributes:
        round_id (int): Round the result belongs to.
        kept (bool): Whether the round contributes a bit pair.
        basis (Basis | None): Common basis of the communication users when kept.
        tau (int | None): Parity bit selecting φ+ (0) or φ− (1) when all relays succeeded.
        flip_user (int | None): User who flipped their bit (None if nobody flipped).
        bit_pair (tuple[int, int] | None): Key bits of (comm_users[0], comm_users[1]) after
            the flip.
        discard_reason (DiscardReason | None): Why the round was discarded.

    Raises:
        pydantic.ValidationError: Wrapping RecordValidationError if kept/bit_pair/discard_reason
            are inconsistent.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    round_id: int = Field(ge=0)
    kept: bool
    basis: Basis | None = None
    tau: int | None = Field(default=None, ge=0, le=1)
    flip_user: int | None = None
    bit_pair: tuple[int, int] | None = None
    discard_reason: DiscardReason | None = None

    @model_validator(mode="after")
    def _validate_outcome(self) -> SiftResult:
        if self.kept and (self.bit_pair is None or self.discard_reason is not None):
            raise RecordValidationError("kept rounds carry bits and no discard reason")
        if not self.kept and (self.discard_reason is None or self.bit_pair is not None):
            raise RecordValidationError("discarded rounds carry a reason and no bits")
        if self.bit_pair is not None and any(b not in (0, 1) for b in self.bit_pair):
            raise RecordValidationError(f"bits must be 0/1, got {self.bit_pair}")
        return self

    @property
    def error(self) -> bool:
        """True for a kept round whose bits disagree."""
        return self.bit_pair is not None and self.bit_pair[0] != self.bit_pair[1]


class ConferenceSiftResult(BaseModel):
    """
    Outcome of sifting a three-party conference round.

    Attributes:
        round_id (int): Round the result belongs to.
        kept (bool): Whether all three users share a basis and every relay succeeded.
        basis (Basis | None): Common basis when kept (Z: key round, X: test round).
        post_selected (GhzSign | None): Three-party state selected by the auxiliary announcements.
        analyzer (GhzSign | None): Equivalent GHZ-analyzer result among the communication users.
        flip_user (int | None): User who flipped (last-listed user, X rounds with analyzer φ3−).
        bits (tuple[int, int, int] | None): Key bits aligned with comm_users, after the flip.
        discard_reason (DiscardReason | None): Why the round was discarded.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    round_id: int = Field(ge=0)
    kept: bool
    basis: Basis | None = None
    post_selected: GhzSign | None = None
    analyzer: GhzSign | None = None
    flip_user: int | None = None
    bits: tuple[int, int, int] | None = None
    discard_reason: DiscardReason | None = None

    @model_validator(mode="after")
    def _validate_outcome(self) -> ConferenceSiftResult:
        if self.kept != (self.bits is not None) or self.kept == (self.discard_reason is not None):
            raise RecordValidationError("kept rounds carry bits; discarded rounds carry a reason")
        return self

    @property
    def errors_vs_first(self) -> tuple[bool, bool]:
        """Disagreement of users 2 and 3 with user 1 (marginal Z errors)."""
        if self.bits is None:
            return (False, False)
        return (self.bits[1] != self.bits[0], self.bits[2] != self.bits[0])

    @property
    def parity_error(self) -> bool:
        """Odd parity of the three bits after correction (X-basis error)."""
        return self.bits is not None and sum(self.bits) % 2 == 1
