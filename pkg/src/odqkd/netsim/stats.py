"""
Empirical estimators over a session and their comparison with the analytic key-rate chain.

Responsibilities
- Estimate: binomial proportion with standard error and a Wilson interval (scipy.stats).
- SessionStats: kept/discard accounting, gains per basis pairing, heralded gains, QBERs,
  the Monte Carlo key rate and, for three users, the conference estimators.
- compare_with_analytic: deltas between simulated and closed-form quantities in σ units.

Notes
- A ZZ (XX) round is one in which every communication user chose Z (X).
- A round is heralded when every auxiliary relay succeeded and every auxiliary user announced
  an X symbol; the heralded gain is the quantity the single-photon yield predicts.
- Zero kept rounds give empty estimates (value None) instead of raising.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence

from pydantic import BaseModel, ConfigDict, Field
from scipy.stats import binomtest

from odqkd.core.alphabet import Basis, DiscardReason
from odqkd.core.constants import DEFAULT_F
from odqkd.core.errors import ParameterError
from odqkd.detector.model import equivalent_detector
from odqkd.keyrate.formulas import (
    key_rate_conference,
    key_rate_ideal,
    link_budget,
    phase_error_xx,
    qber_zz,
    yield_single_photon,
)
from odqkd.protocol.records import ConferenceSiftResult, RoundRecord, SiftResult

from .topology import Topology

__all__ = [
    "Estimate",
    "ConferenceStats",
    "SessionStats",
    "MetricDelta",
    "AnalyticComparison",
    "estimate_statistics",
    "is_heralded",
    "compare_with_analytic",
]

logger = logging.getLogger(__name__)

SIGMA_ALERT = 3.0


class Estimate(BaseModel):
    """
    Binomial proportion k/n.

    Attributes:
        successes (int): k.
        trials (int): n.
        value (float | None): k/n, None when n = 0.
        stderr (float | None): sqrt(p̂(1−p̂)/n).
        ci_low (float | None): Lower end of the 95 % Wilson interval.
        ci_high (float | None): Upper end of the 95 % Wilson interval.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    successes: int = Field(ge=0)
    trials: int = Field(ge=0)
    value: float | None = None
    stderr: float | None = None
    ci_low: float | None = None
    ci_high: float | None = None

    @property
    def empty(self) -> bool:
        return self.trials == 0

    @classmethod
    def from_counts(cls, successes: int, trials: int) -> Estimate:
        """
        Examples:
            >>> Estimate.from_counts(0, 0).empty
            True
            >>> round(Estimate.from_counts(25, 100).stderr, 6)
            0.043301
        """
        if successes < 0 or trials < 0 or successes > trials:
            raise ParameterError(f"invalid counts {successes}/{trials}")
        if trials == 0:
            return cls(successes=0, trials=0)
        value = successes / trials
        ci = binomtest(successes, trials).proportion_ci(confidence_level=0.95, method="wilson")
        return cls(
            successes=successes,
            trials=trials,
            value=value,
            stderr=math.sqrt(value * (1.0 - value) / trials),
            ci_low=float(ci.low),
            ci_high=float(ci.high),
        )


class ConferenceStats(BaseModel):
    """
    Three-party estimators.

    Attributes:
        gain_z (Estimate): Kept ZZZ rounds over ZZZ rounds.
        error_12 (Estimate): Z disagreements of the second user with the first.
        error_13 (Estimate): Z disagreements of the third user with the first.
        error_x (Estimate): Odd parity of kept XXX rounds after the flip.
        rate (float | None): Conference key rate from the estimates.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    gain_z: Estimate
    error_12: Estimate
    error_13: Estimate
    error_x: Estimate
    rate: float | None = None


class SessionStats(BaseModel):
    """
    Aggregate statistics of a session.

    Attributes:
        num_users (int): N.
        comm_users (tuple[int, ...]): Communication users the rounds were sifted for.
        rounds (int): Total rounds.
        kept (int): Rounds that contributed bits.
        discarded (dict[str, int]): Discarded rounds per reason; kept + Σ discarded = rounds.
        rounds_zz (int): Rounds where every communication user chose Z.
        rounds_xx (int): Rounds where every communication user chose X.
        heralded_zz (int): Heralded ZZ rounds.
        heralded_xx (int): Heralded XX rounds.
        gain_zz (Estimate): Kept ZZ rounds over ZZ rounds.
        gain_xx (Estimate): Kept XX rounds over XX rounds.
        heralded_gain_zz (Estimate): Kept ZZ rounds over heralded ZZ rounds.
        heralded_gain_xx (Estimate): Kept XX rounds over heralded XX rounds.
        qber_z (Estimate): Kept Z rounds with any bit disagreement.
        qber_x (Estimate): Kept X rounds with an error after correction.
        key_rate (float | None): Two-party rate from the estimates (None if any is empty).
        conference (ConferenceStats | None): Set when three users communicate.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    num_users: int
    comm_users: tuple[int, ...]
    rounds: int = Field(ge=0)
    kept: int = Field(ge=0)
    discarded: dict[str, int]
    rounds_zz: int = Field(ge=0)
    rounds_xx: int = Field(ge=0)
    heralded_zz: int = Field(ge=0)
    heralded_xx: int = Field(ge=0)
    gain_zz: Estimate
    gain_xx: Estimate
    heralded_gain_zz: Estimate
    heralded_gain_xx: Estimate
    qber_z: Estimate
    qber_x: Estimate
    key_rate: float | None = None
    conference: ConferenceStats | None = None

    @property
    def empty(self) -> bool:
        return self.kept == 0


def is_heralded(record: RoundRecord) -> bool:
    """Every auxiliary relay succeeded and every auxiliary user announced an X symbol."""
    return all(o.successful for o in record.aux_bsm) and all(
        s is not None for s in record.announced_aux_symbols
    )


def _common_basis(record: RoundRecord) -> Basis | None:
    bases = set(record.announced_bases)
    return bases.pop() if len(bases) == 1 else None


def _round_error(result: SiftResult | ConferenceSiftResult) -> bool:
    if isinstance(result, SiftResult):
        return result.error
    if result.basis is Basis.X:
        return result.parity_error
    return any(result.errors_vs_first)


def estimate_statistics(
    records: Sequence[RoundRecord],
    sift_results: Sequence[SiftResult | ConferenceSiftResult],
    *,
    f: float = DEFAULT_F,
) -> SessionStats:
    """
    Aggregate sifted rounds into gains and error rates.

    Raises:
        ParameterError: If the sequences are misaligned or mix different user roles.
    """
    if len(records) != len(sift_results):
        raise ParameterError(f"{len(records)} records but {len(sift_results)} sift results")
    if any(r.round_id != s.round_id for r, s in zip(records, sift_results, strict=True)):
        raise ParameterError("records and sift results are not aligned by round_id")
    roles = {(r.num_users, r.comm_users) for r in records}
    if len(roles) > 1:
        raise ParameterError(f"records mix user roles: {sorted(roles)}")
    num_users, comm_users = roles.pop() if roles else (0, ())

    discarded = {reason.value: 0 for reason in DiscardReason}
    totals = {Basis.Z: 0, Basis.X: 0}
    heralded = {Basis.Z: 0, Basis.X: 0}
    kept = {Basis.Z: 0, Basis.X: 0}
    errors = {Basis.Z: 0, Basis.X: 0}
    err12 = err13 = 0
    for rec, res in zip(records, sift_results, strict=True):
        basis = _common_basis(rec)
        if basis is not None:
            totals[basis] += 1
            if is_heralded(rec):
                heralded[basis] += 1
        if not res.kept:
            assert res.discard_reason is not None
            discarded[res.discard_reason.value] += 1
            continue
        assert res.basis is not None
        kept[res.basis] += 1
        errors[res.basis] += _round_error(res)
        if isinstance(res, ConferenceSiftResult) and res.basis is Basis.Z:
            e12, e13 = res.errors_vs_first
            err12 += e12
            err13 += e13

    qber_z = Estimate.from_counts(errors[Basis.Z], kept[Basis.Z])
    qber_x = Estimate.from_counts(errors[Basis.X], kept[Basis.X])
    gain_zz = Estimate.from_counts(kept[Basis.Z], totals[Basis.Z])
    total_kept = kept[Basis.Z] + kept[Basis.X]
    if total_kept == 0:
        logger.warning("no kept rounds in %d; estimates are empty", len(records))

    conference = None
    key_rate = None
    if len(comm_users) == 3:
        e12_est = Estimate.from_counts(err12, kept[Basis.Z])
        e13_est = Estimate.from_counts(err13, kept[Basis.Z])
        rate = None
        if not (gain_zz.empty or qber_z.empty or qber_x.empty):
            assert gain_zz.value is not None and qber_x.value is not None
            assert e12_est.value is not None and e13_est.value is not None
            rate = key_rate_conference(
                gain_zz.value, e12_est.value, e13_est.value, qber_x.value, f
            )
        conference = ConferenceStats(
            gain_z=gain_zz, error_12=e12_est, error_13=e13_est, error_x=qber_x, rate=rate
        )
    elif gain_zz.value is not None and qber_z.value is not None and qber_x.value is not None:
        key_rate = key_rate_ideal(gain_zz.value, qber_x.value, qber_z.value, f)

    return SessionStats(
        num_users=num_users,
        comm_users=comm_users,
        rounds=len(records),
        kept=total_kept,
        discarded=discarded,
        rounds_zz=totals[Basis.Z],
        rounds_xx=totals[Basis.X],
        heralded_zz=heralded[Basis.Z],
        heralded_xx=heralded[Basis.X],
        gain_zz=gain_zz,
        gain_xx=Estimate.from_counts(kept[Basis.X], totals[Basis.X]),
        heralded_gain_zz=Estimate.from_counts(kept[Basis.Z], heralded[Basis.Z]),
        heralded_gain_xx=Estimate.from_counts(kept[Basis.X], heralded[Basis.X]),
        qber_z=qber_z,
        qber_x=qber_x,
        key_rate=key_rate,
        conference=conference,
    )


class MetricDelta(BaseModel):
    """Simulated minus analytic value of one quantity, in units of the simulated stderr."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str
    simulated: float | None
    analytic: float
    stderr: float | None
    sigma: float | None

    @property
    def within(self) -> bool:
        """True when |delta| ≤ 3σ (or the delta is exactly zero)."""
        if self.simulated is None:
            return False
        if self.sigma is None:
            return self.simulated == self.analytic
        return self.sigma <= SIGMA_ALERT


class AnalyticComparison(BaseModel):
    """Comparison of a session against the closed-form chain at the same link."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    distance_km: float
    p: float
    deltas: tuple[MetricDelta, ...]

    @property
    def consistent(self) -> bool:
        return all(d.within for d in self.deltas)


def _delta(name: str, est: Estimate, analytic: float) -> MetricDelta:
    sigma = None
    if est.value is not None and est.stderr:
        sigma = abs(est.value - analytic) / est.stderr
    delta = MetricDelta(
        name=name, simulated=est.value, analytic=analytic, stderr=est.stderr, sigma=sigma
    )
    if not delta.within:
        logger.warning(
            "%s: simulated %s vs analytic %.6g (%s sigma)", name, est.value, analytic, sigma
        )
    return delta


def compare_with_analytic(stats: SessionStats, topology: Topology) -> AnalyticComparison:
    """
    Deltas in σ units for the heralded Z gain, the Z QBER and the X error rate.

    The link seen by the closed forms has per-arm transmittance equal to the product of the
    source-arm and user-arm survivals of the communication users.

    Raises:
        ParameterError: In conference mode, or when the communication users' arms differ.
    """
    if topology.conference:
        raise ParameterError("the analytic comparison covers two communication users")
    arms = {sum(topology.arm_lengths_km[u]) for u in topology.comm_users}
    if len(arms) != 1:
        raise ParameterError("analytic comparison needs equal arms for the communication users")
    params = topology.params
    distance = 2.0 * arms.pop()
    link = link_budget(distance, params.alpha)
    equiv = equivalent_detector(params)
    p = topology.source_p
    deltas = (
        _delta("heralded_gain_zz", stats.heralded_gain_zz, yield_single_photon(link, equiv)),
        _delta("qber_z", stats.qber_z, qber_zz(p, link, equiv, params.e_d)),
        _delta("qber_x", stats.qber_x, phase_error_xx(p, link, equiv, params.e_d)),
    )
    return AnalyticComparison(distance_km=distance, p=p, deltas=deltas)
