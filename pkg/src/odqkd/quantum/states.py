"""
Dense pure states and density operators on up to 12 qubits.

Responsibilities
- Validated, immutable containers (PureState, DensityOperator) whose invariants hold from
  construction onward.
- Constructors for the states the protocol needs: BB84 preparations, computational strings,
  Bell states, signed GHZ states and the Werner-like GHZ mixture.
- Kronecker composition and purity.

Conventions
- Big-endian qubit order: qubit 0 is the most significant bit of the amplitude index and the
  leftmost Kronecker factor.
- H → |0⟩, V → |1⟩; |±⟩ = (|0⟩ ± |1⟩)/√2.
- Arrays held by the containers are read-only copies; values are safe to share across threads.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal

import numpy as np

from odqkd.core.alphabet import Bb84Symbol
from odqkd.core.constants import (
    HERMITIAN_TOL,
    MAX_STATE_QUBITS,
    MAX_TENSOR_QUBITS,
    MIN_GHZ_QUBITS,
    NORM_TOL,
    PSD_TOL,
)
from odqkd.core.errors import CapacityError, DimensionError, ParameterError
from odqkd.core.typing import ComplexArray

__all__ = [
    "PureState",
    "DensityOperator",
    "BellName",
    "basis_state",
    "computational_state",
    "bell_state",
    "ghz_state",
    "ghz_signed",
    "density",
    "maximally_mixed",
    "werner_ghz",
    "tensor",
    "permute_qubits",
    "purity",
]

BellName = Literal["phi+", "phi-", "psi+", "psi-"]

_INV_SQRT2 = 1.0 / np.sqrt(2.0)


def _frozen(arr: np.ndarray) -> ComplexArray:
    out = np.array(arr, dtype=np.complex128, copy=True)
    out.setflags(write=False)
    return out


def _check_qubit_count(n: int, limit: int = MAX_TENSOR_QUBITS) -> None:
    if n < 1:
        raise DimensionError(f"num_qubits must be >= 1, got {n}")
    if n > limit:
        raise CapacityError(f"num_qubits {n} exceeds the dense backend limit of {limit}")


@dataclass(frozen=True, eq=False)
class PureState:
    """
    Normalized state vector on `num_qubits` qubits.

    Attributes:
        num_qubits (int): Number of qubits (1..12).
        amplitudes (ComplexArray): Length-2^num_qubits amplitude vector, big-endian.

    Raises:
        DimensionError: If the vector length is not 2^num_qubits.
        ParameterError: If the squared norm differs from 1 by more than 1e-10.

    Examples:
        >>> PureState(1, [1, 0]).num_qubits
        1
    """

    num_qubits: int
    amplitudes: ComplexArray

    def __post_init__(self) -> None:
        _check_qubit_count(self.num_qubits)
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape != (2**self.num_qubits,):
            raise DimensionError(
                f"expected {2**self.num_qubits} amplitudes for {self.num_qubits} qubits, "
                f"got {amps.shape[0]}"
            )
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise ParameterError(f"state is not normalized (squared norm {norm!r})")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @property
    def dim(self) -> int:
        return 2**self.num_qubits

    def probabilities(self) -> np.ndarray:
        """Computational-basis outcome probabilities."""
        return np.abs(self.amplitudes) ** 2

    def overlap(self, other: PureState) -> complex:
        """Inner product ⟨self|other⟩."""
        if other.num_qubits != self.num_qubits:
            raise DimensionError("overlap of states with different qubit counts")
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """
    Unit-trace, Hermitian, positive semidefinite operator on `num_qubits` qubits.

    Attributes:
        num_qubits (int): Number of qubits (1..12).
        matrix (ComplexArray): 2^n × 2^n matrix, big-endian qubit order.

    Raises:
        DimensionError: If the matrix is not square of size 2^num_qubits.
        ParameterError: If Hermiticity (1e-10), unit trace (1e-10) or the eigenvalue floor
            (−1e-9) is violated.

    Notes:
        Operations that provably preserve the invariants (composition, partial trace, Born-rule
        updates, mixtures) build results through `_trusted`, skipping the eigen-decomposition.
    """

    num_qubits: int
    matrix: ComplexArray

    def __post_init__(self) -> None:
        _check_qubit_count(self.num_qubits)
        mat = np.asarray(self.matrix, dtype=np.complex128)
        dim = 2**self.num_qubits
        if mat.shape != (dim, dim):
            raise DimensionError(f"expected a {dim}x{dim} matrix, got {mat.shape}")
        if not np.allclose(mat, mat.conj().T, atol=HERMITIAN_TOL, rtol=0.0):
            raise ParameterError("density operator is not Hermitian")
        tr = complex(np.trace(mat))
        if abs(tr - 1.0) > NORM_TOL:
            raise ParameterError(f"density operator trace is {tr!r}, expected 1")
        eig_min = float(np.linalg.eigvalsh(mat).min())
        if eig_min < -PSD_TOL:
            raise ParameterError(f"density operator has negative eigenvalue {eig_min!r}")
        object.__setattr__(self, "matrix", _frozen(mat))

    @classmethod
    def _trusted(cls, num_qubits: int, matrix: np.ndarray) -> DensityOperator:
        obj = object.__new__(cls)
        object.__setattr__(obj, "num_qubits", num_qubits)
        object.__setattr__(obj, "matrix", _frozen(matrix))
        return obj

    @property
    def dim(self) -> int:
        return 2**self.num_qubits

    def expectation(self, op: np.ndarray) -> float:
        """Real part of tr(op·ρ)."""
        return float(np.real(np.einsum("ij,ji->", op, self.matrix)))


def basis_state(symbol: Bb84Symbol) -> PureState:
    """
    Single-qubit state for a BB84 preparation.

    Examples:
        >>> basis_state(Bb84Symbol.ZERO).amplitudes.tolist()
        [(1+0j), 0j]
    """
    amps = {
        Bb84Symbol.ZERO: (1.0, 0.0),
        Bb84Symbol.ONE: (0.0, 1.0),
        Bb84Symbol.PLUS: (_INV_SQRT2, _INV_SQRT2),
        Bb84Symbol.MINUS: (_INV_SQRT2, -_INV_SQRT2),
    }[symbol]
    return PureState(1, np.array(amps, dtype=np.complex128))


def computational_state(bits: str | Sequence[int]) -> PureState:
    """Product state |b0 b1 ...⟩ from a bit string such as "0110"."""
    values = [int(b) for b in bits]
    if not values or any(b not in (0, 1) for b in values):
        raise ParameterError(f"invalid bit string {bits!r}")
    n = len(values)
    amps = np.zeros(2**n, dtype=np.complex128)
    amps[int("".join(map(str, values)), 2)] = 1.0
    return PureState(n, amps)


def ghz_signed(n: int, parity: int = 0) -> PureState:
    """
    (|0…0⟩ + (−1)^parity |1…1⟩)/√2 on n qubits (φ± for n = 2, φ3± for n = 3).

    Raises:
        DimensionError: If n is outside [2, 8].
    """
    if not MIN_GHZ_QUBITS <= n <= MAX_STATE_QUBITS:
        raise DimensionError(
            f"GHZ states need {MIN_GHZ_QUBITS} <= n <= {MAX_STATE_QUBITS}, got {n}"
        )
    amps = np.zeros(2**n, dtype=np.complex128)
    amps[0] = _INV_SQRT2
    amps[-1] = -_INV_SQRT2 if parity % 2 else _INV_SQRT2
    return PureState(n, amps)


def ghz_state(n: int) -> PureState:
    """
    The n-partite GHZ state (|0…0⟩ + |1…1⟩)/√2.

    Args:
        n (int): Number of parties, 2 ≤ n ≤ 8.

    Raises:
        DimensionError: If n is outside [2, 8].

    Examples:
        >>> s = ghz_state(4)
        >>> round(abs(s.amplitudes[0]) ** 2, 12), round(abs(s.amplitudes[15]) ** 2, 12)
        (0.5, 0.5)
    """
    return ghz_signed(n, 0)


def bell_state(name: BellName) -> PureState:
    """Two-qubit Bell state φ± = (|00⟩ ± |11⟩)/√2 or ψ± = (|01⟩ ± |10⟩)/√2."""
    amps = np.zeros(4, dtype=np.complex128)
    if name in ("phi+", "phi-"):
        amps[0] = _INV_SQRT2
        amps[3] = _INV_SQRT2 if name == "phi+" else -_INV_SQRT2
    elif name in ("psi+", "psi-"):
        amps[1] = _INV_SQRT2
        amps[2] = _INV_SQRT2 if name == "psi+" else -_INV_SQRT2
    else:
        raise ParameterError(f"unknown Bell state {name!r}")
    return PureState(2, amps)


def density(state: PureState) -> DensityOperator:
    """Projector |ψ⟩⟨ψ| of a pure state."""
    a = state.amplitudes
    return DensityOperator._trusted(state.num_qubits, np.outer(a, a.conj()))


def maximally_mixed(n: int) -> DensityOperator:
    """Identity / 2^n."""
    _check_qubit_count(n)
    dim = 2**n
    return DensityOperator._trusted(n, np.eye(dim, dtype=np.complex128) / dim)


def werner_ghz(n: int, p: float) -> DensityOperator:
    """
    Werner-like GHZ source: p·|GHZ_n⟩⟨GHZ_n| + (1 − p)/2^n · I.

    Args:
        n (int): Number of parties, 2 ≤ n ≤ 8.
        p (float): Weight of the pure GHZ component in [0, 1].

    Raises:
        ParameterError: If p is outside [0, 1].
        DimensionError: If n is outside [2, 8].
    """
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"Werner weight p must lie in [0, 1], got {p}")
    pure = density(ghz_state(n)).matrix
    dim = 2**n
    mat = p * pure + (1.0 - p) / dim * np.eye(dim, dtype=np.complex128)
    return DensityOperator._trusted(n, mat)


def tensor(
    a: PureState | DensityOperator, b: PureState | DensityOperator
) -> PureState | DensityOperator:
    """
    Kronecker composition a ⊗ b; qubits of `a` come first.

    Raises:
        CapacityError: If the combined qubit count exceeds 12.
        TypeError: If a and b are not the same kind.

    Examples:
        >>> from odqkd.core.alphabet import Bb84Symbol
        >>> s = tensor(basis_state(Bb84Symbol.ZERO), basis_state(Bb84Symbol.ONE))
        >>> int(abs(s.amplitudes).argmax())
        1
    """
    n = a.num_qubits + b.num_qubits
    if n > MAX_TENSOR_QUBITS:
        raise CapacityError(f"composition of {n} qubits exceeds {MAX_TENSOR_QUBITS}")
    if isinstance(a, PureState) and isinstance(b, PureState):
        amps = np.kron(a.amplitudes, b.amplitudes)
        # renormalize away rounding drift accumulated over long products
        return PureState(n, amps / np.linalg.norm(amps))
    if isinstance(a, DensityOperator) and isinstance(b, DensityOperator):
        return DensityOperator._trusted(n, np.kron(a.matrix, b.matrix))
    raise TypeError("tensor() requires two PureStates or two DensityOperators")


def purity(state: DensityOperator) -> float:
    """tr(ρ²)."""
    m = state.matrix
    return float(np.real(np.einsum("ij,ji->", m, m)))


def permute_qubits(state: PureState, order: Sequence[int]) -> PureState:
    """
    Reorder the qubits of a pure state: qubit i of the result is qubit order[i] of the input.

    Raises:
        DimensionError: If order is not a permutation of range(num_qubits).

    Examples:
        >>> int(permute_qubits(computational_state("01"), (1, 0)).amplitudes.argmax())
        2
    """
    n = state.num_qubits
    if sorted(order) != list(range(n)):
        raise DimensionError(f"{tuple(order)} is not a permutation of {n} qubits")
    amps = state.amplitudes.reshape([2] * n).transpose(list(order)).reshape(-1)
    return PureState(n, amps)
