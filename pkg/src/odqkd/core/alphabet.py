"""
Canonical protocol alphabet and normalization helpers.

Defines the discrete symbols shared by the quantum backend, the sifting logic, the simulator
and the record stream: BB84 preparations, bases, relay announcements and the signs of the
post-selected Bell/GHZ states. Zero-IO; source of truth for wire spellings.

Notes:
    - Polarization-to-qubit map is fixed: H → |0⟩, V → |1⟩, D → |+⟩, A → |−⟩.
    - Enum `.value` is the wire spelling used in the record stream ("H", "psi+", "fail", ...).
    - Bit convention: Z basis H/V → 0/1, X basis D/A (plus/minus) → 0/1.

Examples:
    >>> from odqkd.core.alphabet import Bb84Symbol, Basis, symbol_from_value
    >>> Bb84Symbol.PLUS.basis is Basis.X
    True
    >>> symbol_from_value("-") is Bb84Symbol.MINUS
    True
"""

from __future__ import annotations

from enum import Enum

from .errors import ParameterError

__all__ = [
    "Basis",
    "Bb84Symbol",
    "BsmOutcome",
    "BellSign",
    "GhzSign",
    "DiscardReason",
    "symbol_from_value",
    "outcome_from_value",
    "symbols_in_basis",
]


class Basis(Enum):
    """Preparation basis announced by communication users."""

    Z = "Z"
    X = "X"


class Bb84Symbol(Enum):
    """
    The four BB84 preparations.

    Serialized values use polarization letters (H, V, D, A); the derived accessors give the
    basis, the key bit, and the ± sign of X-basis symbols.
    """

    ZERO = "H"
    ONE = "V"
    PLUS = "D"
    MINUS = "A"

    @property
    def basis(self) -> Basis:
        return Basis.Z if self in (Bb84Symbol.ZERO, Bb84Symbol.ONE) else Basis.X

    @property
    def bit(self) -> int:
        """Key bit carried by the symbol (ZERO/PLUS → 0, ONE/MINUS → 1)."""
        return 0 if self in (Bb84Symbol.ZERO, Bb84Symbol.PLUS) else 1

    @property
    def is_minus(self) -> bool:
        return self is Bb84Symbol.MINUS

    @classmethod
    def from_bit(cls, basis: Basis, bit: int) -> Bb84Symbol:
        if basis is Basis.Z:
            return cls.ONE if bit else cls.ZERO
        return cls.MINUS if bit else cls.PLUS


class BsmOutcome(Enum):
    """
    Relay announcement. Only PSI_PLUS/PSI_MINUS are successful Bell-state measurements.
    """

    PSI_PLUS = "psi+"
    PSI_MINUS = "psi-"
    FAILURE = "fail"

    @property
    def successful(self) -> bool:
        return self is not BsmOutcome.FAILURE

    @property
    def is_minus(self) -> bool:
        return self is BsmOutcome.PSI_MINUS


class BellSign(Enum):
    """Sign of the two-party state |00⟩ ± |11⟩ (φ+ / φ−)."""

    PHI_PLUS = "phi+"
    PHI_MINUS = "phi-"

    @property
    def parity(self) -> int:
        return 0 if self is BellSign.PHI_PLUS else 1

    @classmethod
    def from_parity(cls, parity: int) -> BellSign:
        return cls.PHI_MINUS if parity % 2 else cls.PHI_PLUS


class GhzSign(Enum):
    """Sign of the three-party state |000⟩ ± |111⟩ (φ3+ / φ3−)."""

    PHI3_PLUS = "phi3+"
    PHI3_MINUS = "phi3-"

    @property
    def parity(self) -> int:
        return 0 if self is GhzSign.PHI3_PLUS else 1

    @classmethod
    def from_parity(cls, parity: int) -> GhzSign:
        return cls.PHI3_MINUS if parity % 2 else cls.PHI3_PLUS


class DiscardReason(Enum):
    """Why a round did not contribute a bit pair."""

    BSM_FAILURE = "bsm_failure"
    BASIS_MISMATCH = "basis_mismatch"
    AUX_NOT_X = "aux_not_x"


_SYMBOL_ALIASES: dict[str, Bb84Symbol] = {
    "h": Bb84Symbol.ZERO,
    "0": Bb84Symbol.ZERO,
    "zero": Bb84Symbol.ZERO,
    "v": Bb84Symbol.ONE,
    "1": Bb84Symbol.ONE,
    "one": Bb84Symbol.ONE,
    "d": Bb84Symbol.PLUS,
    "+": Bb84Symbol.PLUS,
    "plus": Bb84Symbol.PLUS,
    "a": Bb84Symbol.MINUS,
    "-": Bb84Symbol.MINUS,
    "−": Bb84Symbol.MINUS,
    "minus": Bb84Symbol.MINUS,
}

_OUTCOME_ALIASES: dict[str, BsmOutcome] = {
    "psi+": BsmOutcome.PSI_PLUS,
    "+": BsmOutcome.PSI_PLUS,
    "psi-": BsmOutcome.PSI_MINUS,
    "-": BsmOutcome.PSI_MINUS,
    "fail": BsmOutcome.FAILURE,
    "failure": BsmOutcome.FAILURE,
}


def symbol_from_value(s: str | Bb84Symbol) -> Bb84Symbol:
    """
    Parse a preparation symbol from its wire spelling or a common alias.

    Args:
        s (str | Bb84Symbol): "H"/"V"/"D"/"A", "0"/"1"/"+"/"-", or a symbol.

    Returns:
        Bb84Symbol: Parsed symbol.

    Raises:
        ParameterError: If s is not a known spelling.
    """
    if isinstance(s, Bb84Symbol):
        return s
    try:
        return _SYMBOL_ALIASES[s.strip().lower()]
    except (AttributeError, KeyError):
        raise ParameterError(f"unknown BB84 symbol {s!r}") from None


def outcome_from_value(s: str | BsmOutcome) -> BsmOutcome:
    """
    Parse a relay announcement from "psi+", "psi-", "fail" (or "+"/"-").

    Raises:
        ParameterError: If s is not a known spelling.
    """
    if isinstance(s, BsmOutcome):
        return s
    try:
        return _OUTCOME_ALIASES[s.strip().lower()]
    except (AttributeError, KeyError):
        raise ParameterError(f"unknown BSM outcome {s!r}") from None


def symbols_in_basis(basis: Basis) -> tuple[Bb84Symbol, Bb84Symbol]:
    """Return the two symbols of a basis ordered by bit value."""
    return (Bb84Symbol.from_bit(basis, 0), Bb84Symbol.from_bit(basis, 1))
