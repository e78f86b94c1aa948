"""
Closed-form model of the linear-optics Bell-state measurement with threshold detectors.

Responsibilities
- DetectorParams: validated experimental parameters (efficiency, dark count, misalignment,
  error-correction inefficiency, fiber loss).
- Success probabilities of the relay for same-polarization, different-polarization and
  single-photon inputs.
- EquivalentDetector: the per-basis efficiencies and dark count that the relay presents to the
  key-rate analysis when it is treated as a single detector on the GHZ qubit.

Notes
- Dark counts are independent per detector per gate, without afterpulsing.
- The Z-basis efficiency averages the two equally likely input pairings (HH and HV), hence
  the factor 1/2; only HV can produce a genuine ψ± pattern.
- Values are kept at full precision; `round_to_sig` is for presentation only.
"""

from __future__ import annotations

import math

from pydantic import BaseModel, ConfigDict, Field

from odqkd.core.constants import (
    DEFAULT_ALPHA,
    DEFAULT_E_D,
    DEFAULT_ETA_D,
    DEFAULT_F,
    DEFAULT_P_D,
)
from odqkd.core.errors import ParameterError

__all__ = [
    "DetectorParams",
    "EquivalentDetector",
    "prob_bsm_same_pol",
    "prob_bsm_diff_pol",
    "prob_bsm_single",
    "equivalent_eff_z",
    "equivalent_eff_x",
    "equivalent_dark",
    "equivalent_detector",
    "round_to_sig",
]


class DetectorParams(BaseModel):
    """
    Experimental parameters of the relays and the fiber.

    Attributes:
        eta_d (float): Detection efficiency of each threshold detector, in [0, 1].
        p_d (float): Dark count probability per detector per gate, in [0, 1].
        e_d (float): Misalignment error probability, in [0, 1].
        f (float): Error-correction inefficiency (>= 1).
        alpha (float): Fiber loss coefficient in dB/km (>= 0).

    Examples:
        >>> DetectorParams().eta_d
        0.4
        >>> DetectorParams(eta_d=1.0, p_d=0.0).p_d
        0.0
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    eta_d: float = Field(default=DEFAULT_ETA_D, ge=0.0, le=1.0)
    p_d: float = Field(default=DEFAULT_P_D, ge=0.0, le=1.0)
    e_d: float = Field(default=DEFAULT_E_D, ge=0.0, le=1.0)
    f: float = Field(default=DEFAULT_F, ge=1.0)
    alpha: float = Field(default=DEFAULT_ALPHA, ge=0.0)


class EquivalentDetector(BaseModel):
    """
    The relay seen as one detector on the source qubit.

    Attributes:
        eta_z (float): Equivalent efficiency for Z-basis inputs.
        eta_x (float): Equivalent efficiency for X-basis inputs.
        dark (float): Equivalent dark count probability.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    eta_z: float = Field(ge=0.0, le=1.0)
    eta_x: float = Field(ge=0.0, le=1.0)
    dark: float = Field(ge=0.0, le=1.0)

    def rounded(self, digits: int = 2) -> tuple[float, float, float]:
        """(eta_z, eta_x, dark) rounded to `digits` significant figures."""
        return (
            round_to_sig(self.eta_z, digits),
            round_to_sig(self.eta_x, digits),
            round_to_sig(self.dark, digits),
        )


def prob_bsm_same_pol(params: DetectorParams) -> float:
    """
    Success probability for inputs |H⟩|H⟩.

    The two photons bunch into one H detector, so a ψ± pattern needs exactly one dark count on
    a V detector: P_HH = 2·p_d·(1−p_d)²·(1−(1−p_d)(1−η_d)²).
    """
    p, eta = params.p_d, params.eta_d
    return 2.0 * p * (1.0 - p) ** 2 * (1.0 - (1.0 - p) * (1.0 - eta) ** 2)


def prob_bsm_diff_pol(params: DetectorParams) -> float:
    """
    Success probability for inputs |H⟩|V⟩.

    P_HV = (1−p_d)²·(1−(1−p_d)(1−η_d))²: both photons register and the two idle detectors stay
    silent.
    """
    p, eta = params.p_d, params.eta_d
    return (1.0 - p) ** 2 * (1.0 - (1.0 - p) * (1.0 - eta)) ** 2


def prob_bsm_single(params: DetectorParams) -> float:
    """
    Success probability for one H photon against vacuum: P_H = 2·p_d·(1−p_d)²·η_d.

    This is the first-order term in p_d; a dark count on the photon's own detector is
    neglected.
    """
    p = params.p_d
    return 2.0 * p * (1.0 - p) ** 2 * params.eta_d


def equivalent_eff_z(params: DetectorParams) -> float:
    """
    Equivalent efficiency for an |H⟩ (or |V⟩) input.

    Returns:
        float: ½·(1−p_d)²·[2p_d(1−(1−p_d)(1−η_d)²) + (1−(1−p_d)(1−η_d))²], which equals
        ½·(P_HH + P_HV).

    Examples:
        >>> round_to_sig(equivalent_eff_z(DetectorParams()), 2)
        0.08
        >>> equivalent_eff_z(DetectorParams(eta_d=1.0, p_d=0.0))
        0.5
    """
    p, eta = params.p_d, params.eta_d
    return (
        0.5
        * (1.0 - p) ** 2
        * (2.0 * p * (1.0 - (1.0 - p) * (1.0 - eta) ** 2) + (1.0 - (1.0 - p) * (1.0 - eta)) ** 2)
    )


def equivalent_eff_x(params: DetectorParams) -> float:
    """
    Equivalent efficiency for a |+⟩ (or |−⟩) input: (1−p_d)²·(1−(1−p_d)(1−η_d))².

    Examples:
        >>> round_to_sig(equivalent_eff_x(DetectorParams()), 2)
        0.16
    """
    return prob_bsm_diff_pol(params)


def equivalent_dark(params: DetectorParams) -> float:
    """Equivalent dark count p_d′ = 2·p_d·(1−p_d)²·η_d."""
    p = params.p_d
    return 2.0 * p * (1.0 - p) ** 2 * params.eta_d


def equivalent_detector(params: DetectorParams) -> EquivalentDetector:
    """
    Bundle the equivalent efficiencies and dark count.

    Examples:
        >>> equivalent_detector(DetectorParams()).rounded()
        (0.08, 0.16, 6.4e-08)
    """
    return EquivalentDetector(
        eta_z=equivalent_eff_z(params),
        eta_x=equivalent_eff_x(params),
        dark=equivalent_dark(params),
    )


def round_to_sig(x: float, digits: int = 2) -> float:
    """
    Round to `digits` significant figures.

    Raises:
        ParameterError: If digits < 1 or x is not finite.

    Examples:
        >>> round_to_sig(0.080000041, 2), round_to_sig(6.39999e-8, 2), round_to_sig(0.0)
        (0.08, 6.4e-08, 0.0)
    """
    if digits < 1:
        raise ParameterError(f"digits must be >= 1, got {digits}")
    if not math.isfinite(x):
        raise ParameterError(f"cannot round non-finite value {x}")
    return float(f"{x:.{digits}g}")
