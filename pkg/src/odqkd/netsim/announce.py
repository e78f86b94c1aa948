"""
Public classical channel: the ordered broadcast log of a session and sifting from it.

Responsibilities
- announce_phase: turn records into the broadcast log. Per round, relays announce their BSM
  results first, then communication users their bases, then auxiliary users their X symbols.
- decisions_from_log / sift_from_log: rebuild the public sifting decisions from the log alone,
  then combine them with the communication users' own bits.

Notes
- Within each phase entries are ordered by user index; rounds are ordered by round_id.
- An auxiliary user who prepared in Z announces nothing, so the log has no entry for them.
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterable, Sequence
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from odqkd.core.alphabet import Basis, Bb84Symbol, BsmOutcome
from odqkd.core.errors import ParameterError
from odqkd.protocol.records import RoundRecord, SiftResult
from odqkd.protocol.sifting import (
    FlipRule,
    SiftDecision,
    flip_decision,
    sift_decision,
    two_party_result,
)

from .topology import relay_node, user_node

__all__ = [
    "Announcement",
    "announce_phase",
    "decisions_from_log",
    "sift_from_log",
]

AnnouncementKind = Literal["bsm", "basis", "aux_symbol"]


class Announcement(BaseModel):
    """
    One broadcast message.

    Attributes:
        round_id (int): Round the message belongs to.
        node (str): Sender ("relay-<i>" or "user-<i>").
        user (int): User index the sender belongs to.
        kind (str): "bsm", "basis" or "aux_symbol".
        value (str): Wire spelling of the announced outcome, basis or symbol.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    round_id: int = Field(ge=0)
    node: str
    user: int = Field(ge=0)
    kind: AnnouncementKind
    value: str


def _round_announcements(rec: RoundRecord) -> list[Announcement]:
    rid = rec.round_id
    log = [
        Announcement(round_id=rid, node=relay_node(i), user=i, kind="bsm", value=o.value)
        for i, o in enumerate(rec.bsm)
    ]
    bases = dict(zip(rec.comm_users, rec.announced_bases, strict=True))
    log += [
        Announcement(round_id=rid, node=user_node(u), user=u, kind="basis", value=bases[u].value)
        for u in sorted(bases)
    ]
    log += [
        Announcement(round_id=rid, node=user_node(u), user=u, kind="aux_symbol", value=s.value)
        for u, s in zip(rec.aux_users, rec.announced_aux_symbols, strict=True)
        if s is not None
    ]
    return log


def announce_phase(records: Iterable[RoundRecord]) -> list[Announcement]:
    """
    Broadcast log of a session, ordered by (round_id, phase, user).

    Examples:
        >>> from odqkd.core.alphabet import Bb84Symbol as S, BsmOutcome as B
        >>> preps = [S.ZERO, S.ONE, S.PLUS, S.MINUS]
        >>> rec = RoundRecord.from_round(0, preps, [B.PSI_PLUS] * 4, (0, 1))
        >>> [a.kind for a in announce_phase([rec])].count("aux_symbol")
        2
    """
    out: list[Announcement] = []
    for rec in sorted(records, key=lambda r: r.round_id):
        out.extend(_round_announcements(rec))
    return out


def decisions_from_log(
    log: Sequence[Announcement],
    num_users: int,
    comm_users: Sequence[int],
    flip_rule: FlipRule = flip_decision,
) -> dict[int, SiftDecision]:
    """
    Public sifting decision per round, using only the broadcast log.

    Raises:
        ParameterError: If a round lacks a BSM result or a basis announcement.
    """
    by_round: dict[int, list[Announcement]] = defaultdict(list)
    for a in log:
        by_round[a.round_id].append(a)
    aux_users = [i for i in range(num_users) if i not in comm_users]
    decisions: dict[int, SiftDecision] = {}
    for rid in sorted(by_round):
        entries = by_round[rid]
        bsm = {a.user: BsmOutcome(a.value) for a in entries if a.kind == "bsm"}
        bases = {a.user: Basis(a.value) for a in entries if a.kind == "basis"}
        symbols = {a.user: Bb84Symbol(a.value) for a in entries if a.kind == "aux_symbol"}
        if len(bsm) != num_users or any(u not in bases for u in comm_users):
            raise ParameterError(f"round {rid}: incomplete announcements")
        decisions[rid] = sift_decision(
            [bsm[i] for i in range(num_users)],
            list(comm_users),
            [bases[u] for u in comm_users],
            [symbols.get(u) for u in aux_users],
            flip_rule,
        )
    return decisions


def sift_from_log(
    log: Sequence[Announcement],
    records: Sequence[RoundRecord],
    flip_rule: FlipRule = flip_decision,
) -> list[SiftResult]:
    """
    Two-party sifting where the decisions come from the log and only the communication users'
    own preparations come from the records.
    """
    if not records:
        return []
    num_users, comm = records[0].num_users, records[0].comm_users
    if len(comm) != 2:
        raise ParameterError("sift_from_log handles two communication users")
    decisions = decisions_from_log(log, num_users, comm, flip_rule)
    return [
        two_party_result(rec.round_id, rec.preparations, comm, decisions[rec.round_id])
        for rec in records
    ]
