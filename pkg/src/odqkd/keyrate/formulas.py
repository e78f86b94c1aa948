"""
Analytic key-rate chain for a Werner-state source behind equivalent detectors.

Responsibilities
- Binary entropy and the fiber link budget.
- Single-photon yield, Z-basis QBER and X-basis phase error per basis.
- Two-party rates (ideal GLLP form and the realistic single-photon form) and the three-party
  conference rate.

Notes
- Distance L is the total fiber length between the communication users; each arm transmits
  10^(−αL/20), or 10^(−αL/40) when the relays sit at the midpoint.
- The yield and error formulas are applied per basis: Z quantities use the Z equivalent
  efficiency, X quantities the X one, with the same dark count in both.
- The overall Z gain is taken equal to the single-photon yield (no decoy estimation).
- Negative rates are clamped to 0 and flagged rather than raised; sweeps cross the cutoff
  routinely.
"""

from __future__ import annotations

import logging

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from odqkd.core.alphabet import Basis
from odqkd.core.errors import ParameterError, UndefinedRateError
from odqkd.detector.model import DetectorParams, EquivalentDetector

__all__ = [
    "LinkBudget",
    "KeyRatePoint",
    "binary_entropy",
    "link_budget",
    "yield_single_photon",
    "qber_zz",
    "phase_error_xx",
    "key_rate_ideal",
    "key_rate_realistic",
    "realistic_rate_unclamped",
    "yield_vanishes",
    "key_rate_conference",
]

logger = logging.getLogger(__name__)

# Error rate of a random (uncorrelated) coincidence.
E0 = 0.5


class LinkBudget(BaseModel):
    """
    Fiber channel between the two communication users.

    Attributes:
        distance_km (float): Total user-to-user fiber length (>= 0).
        alpha (float): Loss coefficient in dB/km (>= 0).
        relay_at_midpoint (bool): Halve the exponent (relays placed between user and source).

    Examples:
        >>> LinkBudget(distance_km=100.0, alpha=0.2).transmittance
        0.1
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    distance_km: float = Field(ge=0.0)
    alpha: float = Field(ge=0.0)
    relay_at_midpoint: bool = False

    @property
    def transmittance(self) -> float:
        """Per-arm transmittance."""
        divisor = 40.0 if self.relay_at_midpoint else 20.0
        return float(10.0 ** (-self.alpha * self.distance_km / divisor))

    def arm_efficiency(self, efficiency: float) -> float:
        """Total detection efficiency of one arm given the equivalent detector efficiency."""
        return efficiency * self.transmittance


class KeyRatePoint(BaseModel):
    """
    One evaluation of the realistic two-party key rate.

    Attributes:
        distance_km (float): User-to-user distance.
        p (float): Werner weight of the source.
        gain_zz (float): Overall Z-basis gain (equal to the single-photon yield).
        qber_zz (float): Z-basis quantum bit error rate.
        phase_error_xx (float): X-basis single-photon phase error.
        rate (float): Secret bits per emitted pair, >= 0.
        clamped (bool): True when the analytic expression was negative and `rate` was set to 0.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    distance_km: float = Field(ge=0.0)
    p: float = Field(ge=0.0, le=1.0)
    gain_zz: float = Field(ge=0.0, le=1.0)
    qber_zz: float = Field(ge=0.0, le=1.0)
    phase_error_xx: float = Field(ge=0.0, le=1.0)
    rate: float = Field(ge=0.0)
    clamped: bool = False


def binary_entropy(x: float) -> float:
    """
    H(x) = −x·log₂x − (1−x)·log₂(1−x), with H(0) = H(1) = 0.

    Raises:
        ParameterError: If x lies outside [0, 1].

    Examples:
        >>> binary_entropy(0.5), binary_entropy(0.0)
        (1.0, 0.0)
        >>> round(binary_entropy(0.02), 6)
        0.141441
    """
    if not 0.0 <= x <= 1.0:
        raise ParameterError(f"binary entropy needs x in [0, 1], got {x}")
    if x in (0.0, 1.0):
        return 0.0
    return float(-x * np.log2(x) - (1.0 - x) * np.log2(1.0 - x))


def link_budget(
    distance_km: float, alpha: float, *, relay_at_midpoint: bool = False
) -> LinkBudget:
    """Build a LinkBudget (validated)."""
    return LinkBudget(distance_km=distance_km, alpha=alpha, relay_at_midpoint=relay_at_midpoint)


def _efficiency(equiv: EquivalentDetector, basis: Basis) -> float:
    return equiv.eta_z if basis is Basis.Z else equiv.eta_x


def yield_single_photon(
    link: LinkBudget, equiv: EquivalentDetector, basis: Basis = Basis.Z
) -> float:
    """
    Coincidence probability given a single-photon pair.

    Y_11 = [1 − (1−p_d′)(1−η_A)]·[1 − (1−p_d′)(1−η_B)] with η_A = η_B the arm efficiency of
    `basis`.

    Examples:
        >>> eq = EquivalentDetector(eta_z=1.0, eta_x=1.0, dark=0.0)
        >>> yield_single_photon(LinkBudget(distance_km=0.0, alpha=0.2), eq)
        1.0
    """
    eta = link.arm_efficiency(_efficiency(equiv, basis))
    # 1 − (1−p_d′)(1−η) expanded so a tiny η does not cancel to 0
    single = equiv.dark + eta - equiv.dark * eta
    return single * single


def yield_vanishes(link: LinkBudget, equiv: EquivalentDetector) -> bool:
    """True when either basis yield is 0 (no coincidences, error rates undefined)."""
    return any(yield_single_photon(link, equiv, basis) <= 0.0 for basis in Basis)


def _error_rate(
    p: float, link: LinkBudget, equiv: EquivalentDetector, e_d: float, basis: Basis
) -> float:
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"Werner weight must lie in [0, 1], got {p}")
    if not 0.0 <= e_d <= 1.0:
        raise ParameterError(f"misalignment must lie in [0, 1], got {e_d}")
    y11 = yield_single_photon(link, equiv, basis)
    if y11 <= 0.0:
        raise UndefinedRateError(
            f"single-photon yield vanishes at {link.distance_km} km ({basis.value} basis)"
        )
    eta = link.arm_efficiency(_efficiency(equiv, basis))
    return E0 - p * eta * eta * (E0 - e_d) / y11


def phase_error_xx(p: float, link: LinkBudget, equiv: EquivalentDetector, e_d: float) -> float:
    """
    Single-photon phase error e_0 − p·η_A·η_B·(e_0 − e_d)/Y_11 with X-basis efficiencies.

    Raises:
        ParameterError: If p or e_d is outside [0, 1].
        UndefinedRateError: If the X-basis yield is 0.
    """
    return _error_rate(p, link, equiv, e_d, Basis.X)


def qber_zz(p: float, link: LinkBudget, equiv: EquivalentDetector, e_d: float) -> float:
    """Z-basis QBER; same form as `phase_error_xx` with Z-basis efficiencies."""
    return _error_rate(p, link, equiv, e_d, Basis.Z)


def _clamp(raw: float) -> tuple[float, bool]:
    return (raw, False) if raw >= 0.0 else (0.0, True)


def key_rate_ideal(gain_zz: float, e_xx: float, e_zz: float, f: float) -> float:
    """
    GLLP rate Q·[1 − H(e_XX) − f·H(e_ZZ)], clamped at 0.

    Examples:
        >>> key_rate_ideal(1.0, 0.0, 0.0, 1.16)
        1.0
    """
    raw = gain_zz * (1.0 - binary_entropy(e_xx) - f * binary_entropy(e_zz))
    return _clamp(raw)[0]


def realistic_rate_unclamped(
    p: float, link: LinkBudget, equiv: EquivalentDetector, params: DetectorParams
) -> tuple[float, float, float, float]:
    """
    (raw rate, gain_zz, qber_zz, phase_error_xx) before clamping.

    A vanishing yield gives a zero rate with both error rates at e_0.
    """
    gain = yield_single_photon(link, equiv, Basis.Z)
    if yield_vanishes(link, equiv):
        if not 0.0 <= p <= 1.0:
            raise ParameterError(f"Werner weight must lie in [0, 1], got {p}")
        return 0.0, gain, E0, E0
    e_zz = min(max(qber_zz(p, link, equiv, params.e_d), 0.0), 1.0)
    e_xx = min(max(phase_error_xx(p, link, equiv, params.e_d), 0.0), 1.0)
    raw = gain * (1.0 - binary_entropy(e_xx)) - gain * params.f * binary_entropy(e_zz)
    return raw, gain, e_zz, e_xx


def key_rate_realistic(
    p: float, link: LinkBudget, equiv: EquivalentDetector, params: DetectorParams
) -> KeyRatePoint:
    """
    Realistic two-party rate R = Q_11(1 − H(e_XX)) − Q·f·H(E_ZZ) with Q = Q_11 = Y_11.

    Args:
        p (float): Werner weight of the source.
        link (LinkBudget): Channel between the communication users.
        equiv (EquivalentDetector): Equivalent relay detector.
        params (DetectorParams): Supplies e_d and f.

    Returns:
        KeyRatePoint: Gains, error rates and the clamped rate.

    Past the reach of the detectors (a yield of 0) the point has rate 0, error rates e_0 and
    `clamped` set.

    Raises:
        ParameterError: If p is outside [0, 1].
    """
    raw, gain, e_zz, e_xx = realistic_rate_unclamped(p, link, equiv, params)
    rate, clamped = _clamp(raw)
    if yield_vanishes(link, equiv):
        clamped = True
        logger.debug("yield vanishes at L=%s km; rate set to 0", link.distance_km)
    if clamped:
        logger.debug("negative rate %.3g at p=%s, L=%s km clamped", raw, p, link.distance_km)
    return KeyRatePoint(
        distance_km=link.distance_km,
        p=p,
        gain_zz=gain,
        qber_zz=min(max(e_zz, 0.0), 1.0),
        phase_error_xx=min(max(e_xx, 0.0), 1.0),
        rate=rate,
        clamped=clamped,
    )


def key_rate_conference(
    gain_z: float, e_marginal_12: float, e_marginal_13: float, e_x: float, f: float
) -> float:
    """
    Three-party conference rate Q_Z·{1 − f·max[H(E_12), H(E_13)] − H(E_X)}, clamped at 0.

    Examples:
        >>> key_rate_conference(1.0, 0.0, 0.0, 0.0, 1.16)
        1.0
        >>> key_rate_conference(1.0, 0.0, 0.0, 0.5, 1.16)
        0.0
    """
    worst = max(binary_entropy(e_marginal_12), binary_entropy(e_marginal_13))
    raw = gain_z * (1.0 - f * worst - binary_entropy(e_x))
    return _clamp(raw)[0]
