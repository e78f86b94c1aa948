"""
POVM elements, Born-rule measurement, partial trace and local channels.

Responsibilities
- MeasurementOperator: a validated POVM element (0 ≤ E ≤ I) with an outcome label.
- Embedding of few-qubit operators into an n-qubit register (identity elsewhere).
- Lüders-rule measurement with a flagged null branch for vanishing probabilities.
- Partial trace, Pauli channels and joint outcome distributions of local POVM families.

Notes
- Qubit order follows odqkd.quantum.states (big-endian, qubit 0 leftmost).
- Tensor contractions use numpy.einsum in sublist form so registers up to 12 qubits
  (24 axes) stay within einsum's label space.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Literal, NamedTuple

import numpy as np

from odqkd.core.alphabet import BsmOutcome
from odqkd.core.constants import HERMITIAN_TOL, MAX_TENSOR_QUBITS, NULL_PROBABILITY, PSD_TOL
from odqkd.core.errors import CapacityError, DimensionError, ParameterError

from .states import BellName, DensityOperator, PureState, bell_state, density

__all__ = [
    "MeasurementOperator",
    "MeasurementResult",
    "PauliName",
    "embed_operator",
    "projector",
    "bell_projector",
    "complement",
    "apply_local",
    "measure",
    "partial_trace",
    "pauli_channel",
    "local_outcome_distribution",
]

PauliName = Literal["X", "Y", "Z"]

_PAULI: dict[str, np.ndarray] = {
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def _readonly(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=np.complex128, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class MeasurementOperator:
    """
    POVM element on `num_qubits` qubits.

    Attributes:
        num_qubits (int): Register size the operator acts on.
        matrix (ComplexArray): Hermitian 2^n × 2^n matrix with spectrum in [0, 1].
        label (str): Outcome tag, e.g. "psi+" or "complement".

    Raises:
        DimensionError: If the matrix shape does not match num_qubits.
        ParameterError: If the matrix is not Hermitian or an eigenvalue leaves [−1e-9, 1 + 1e-9].
    """

    num_qubits: int
    matrix: np.ndarray
    label: str = ""

    def __post_init__(self) -> None:
        if not 1 <= self.num_qubits <= MAX_TENSOR_QUBITS:
            raise CapacityError(f"num_qubits {self.num_qubits} outside 1..{MAX_TENSOR_QUBITS}")
        mat = np.asarray(self.matrix, dtype=np.complex128)
        dim = 2**self.num_qubits
        if mat.shape != (dim, dim):
            raise DimensionError(f"expected a {dim}x{dim} operator, got {mat.shape}")
        if not np.allclose(mat, mat.conj().T, atol=HERMITIAN_TOL, rtol=0.0):
            raise ParameterError(f"measurement operator {self.label!r} is not Hermitian")
        eig = np.linalg.eigvalsh(mat)
        if eig.min() < -PSD_TOL or eig.max() > 1.0 + PSD_TOL:
            raise ParameterError(
                f"measurement operator {self.label!r} has spectrum outside [0, 1]: "
                f"[{eig.min()!r}, {eig.max()!r}]"
            )
        object.__setattr__(self, "matrix", _readonly(mat))

    @classmethod
    def _trusted(cls, num_qubits: int, matrix: np.ndarray, label: str) -> MeasurementOperator:
        obj = object.__new__(cls)
        object.__setattr__(obj, "num_qubits", num_qubits)
        object.__setattr__(obj, "matrix", _readonly(matrix))
        object.__setattr__(obj, "label", label)
        return obj

    def sqrt(self) -> np.ndarray:
        """Positive square root √E (equal to E for projectors)."""
        w, v = np.linalg.eigh(self.matrix)
        return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


class MeasurementResult(NamedTuple):
    """Outcome probability and the renormalized post-measurement state (None when null)."""

    probability: float
    post_state: DensityOperator | None

    @property
    def is_null(self) -> bool:
        return self.post_state is None


def _check_qubits(qubits: Sequence[int], n: int) -> list[int]:
    q = [int(i) for i in qubits]
    if len(set(q)) != len(q):
        raise ParameterError(f"qubit indices must be distinct, got {tuple(q)}")
    if any(i < 0 or i >= n for i in q):
        raise DimensionError(f"qubit indices {tuple(q)} out of range for {n} qubits")
    return q


def embed_operator(op: np.ndarray, qubits: Sequence[int], n: int) -> np.ndarray:
    """
    Lift a k-qubit operator acting on `qubits` (in that order) to an n-qubit register.

    Args:
        op (np.ndarray): 2^k × 2^k matrix; its first tensor factor acts on qubits[0].
        qubits (Sequence[int]): Distinct target indices, len k.
        n (int): Register size.

    Returns:
        np.ndarray: 2^n × 2^n matrix equal to op on `qubits` and identity elsewhere.

    Raises:
        ParameterError: If indices repeat.
        DimensionError: If indices are out of range or op has the wrong shape.
        CapacityError: If n exceeds 12.
    """
    if n > MAX_TENSOR_QUBITS:
        raise CapacityError(f"register of {n} qubits exceeds {MAX_TENSOR_QUBITS}")
    targets = _check_qubits(qubits, n)
    k = len(targets)
    op = np.asarray(op, dtype=np.complex128)
    if op.shape != (2**k, 2**k):
        raise DimensionError(f"operator shape {op.shape} does not act on {k} qubits")
    rest = [i for i in range(n) if i not in targets]
    full = np.kron(op, np.eye(2 ** len(rest), dtype=np.complex128))
    order = targets + rest
    perm = list(np.argsort(order))
    axes = perm + [n + p for p in perm]
    return full.reshape([2] * (2 * n)).transpose(axes).reshape(2**n, 2**n)


def projector(
    state: PureState, qubits: Sequence[int], n: int, label: str = ""
) -> MeasurementOperator:
    """Projector |s⟩⟨s| of a pure state on `qubits`, identity on the rest of the register."""
    a = state.amplitudes
    if len(qubits) != state.num_qubits:
        raise DimensionError(
            f"{state.num_qubits}-qubit state cannot act on qubits {tuple(qubits)}"
        )
    mat = embed_operator(np.outer(a, a.conj()), qubits, n)
    return MeasurementOperator._trusted(n, mat, label)


def bell_projector(
    outcome: BsmOutcome, qubit_pair: tuple[int, int], n: int
) -> MeasurementOperator:
    """
    |ψ±⟩⟨ψ±| on a qubit pair of an n-qubit register.

    Args:
        outcome (BsmOutcome): PSI_PLUS or PSI_MINUS.
        qubit_pair (tuple[int, int]): Distinct qubit indices; the first is the |0⟩ side of |01⟩.
        n (int): Register size.

    Raises:
        ParameterError: If the indices are equal or the outcome is FAILURE.

    Examples:
        >>> from odqkd.core.alphabet import BsmOutcome
        >>> op = bell_projector(BsmOutcome.PSI_MINUS, (0, 1), 2)
        >>> round(float(op.matrix[1, 1].real), 12)
        0.5
    """
    if outcome is BsmOutcome.FAILURE:
        raise ParameterError("FAILURE has no Bell projector")
    i, j = qubit_pair
    if i == j:
        raise ParameterError(f"Bell projector needs two distinct qubits, got ({i}, {j})")
    name: BellName = "psi+" if outcome is BsmOutcome.PSI_PLUS else "psi-"
    return projector(bell_state(name), (i, j), n, label=outcome.value)


def complement(
    ops: Iterable[MeasurementOperator], label: str = "complement"
) -> MeasurementOperator:
    """
    I − Σ E_k, completing a set of POVM elements.

    Raises:
        ValueError: If ops is empty.
        DimensionError: If register sizes differ.
        ParameterError: If the elements sum to more than the identity.
    """
    items = list(ops)
    if not items:
        raise ValueError("complement() of an empty operator set")
    n = items[0].num_qubits
    if any(op.num_qubits != n for op in items):
        raise DimensionError("complement() over operators on different registers")
    total = sum((op.matrix for op in items), start=np.zeros((2**n, 2**n), dtype=np.complex128))
    return MeasurementOperator(n, np.eye(2**n, dtype=np.complex128) - total, label)


def apply_local(
    state: PureState | DensityOperator, op: np.ndarray, qubits: Sequence[int]
) -> np.ndarray:
    """
    A ρ A† with A embedded on `qubits`; the result is not renormalized.

    Returns:
        np.ndarray: Unnormalized 2^n × 2^n operator; its trace is the branch weight.
    """
    rho = density(state) if isinstance(state, PureState) else state
    a = embed_operator(op, qubits, rho.num_qubits)
    return a @ rho.matrix @ a.conj().T


def measure(state: PureState | DensityOperator, op: MeasurementOperator) -> MeasurementResult:
    """
    Born probability and Lüders post-state √E ρ √E / p.

    Args:
        state (PureState | DensityOperator): State to measure.
        op (MeasurementOperator): POVM element on the same register.

    Returns:
        MeasurementResult: (probability, post_state); post_state is None when p < 1e-12.

    Raises:
        ParameterError: If the register sizes differ.

    Examples:
        >>> from odqkd.quantum.states import maximally_mixed, computational_state
        >>> op = projector(computational_state("0"), (0,), 1)
        >>> round(measure(maximally_mixed(1), op).probability, 12)
        0.5
    """
    rho = density(state) if isinstance(state, PureState) else state
    if rho.num_qubits != op.num_qubits:
        raise ParameterError(
            f"state on {rho.num_qubits} qubits measured with operator on {op.num_qubits}"
        )
    prob = float(np.real(np.einsum("ij,ji->", op.matrix, rho.matrix)))
    if prob < NULL_PROBABILITY:
        return MeasurementResult(max(prob, 0.0), None)
    root = op.sqrt()
    post = root @ rho.matrix @ root.conj().T
    post = 0.5 * (post + post.conj().T) / prob
    return MeasurementResult(min(prob, 1.0), DensityOperator._trusted(rho.num_qubits, post))


def partial_trace(state: PureState | DensityOperator, keep: Iterable[int]) -> DensityOperator:
    """
    Reduced state on the qubits in `keep` (returned in ascending index order).

    Raises:
        ParameterError: If keep is empty.
        DimensionError: If an index is out of range.

    Examples:
        >>> from odqkd.quantum.states import bell_state
        >>> red = partial_trace(bell_state("phi+"), {0})
        >>> [round(float(x.real), 12) for x in red.matrix.diagonal()]
        [0.5, 0.5]
    """
    rho = density(state) if isinstance(state, PureState) else state
    n = rho.num_qubits
    kept = sorted(set(_check_qubits(list(set(keep)), n)))
    if not kept:
        raise ParameterError("partial_trace() needs at least one qubit to keep")
    if len(kept) == n:
        return rho
    rows = list(range(n))
    cols = [n + i if i in kept else i for i in range(n)]
    out = kept + [n + i for i in kept]
    tensor = rho.matrix.reshape([2] * (2 * n))
    reduced = np.einsum(tensor, rows + cols, out)
    dim = 2 ** len(kept)
    return DensityOperator._trusted(len(kept), reduced.reshape(dim, dim))


def pauli_channel(
    state: DensityOperator, qubit: int, pauli: PauliName, probability: float
) -> DensityOperator:
    """
    ρ → (1 − q)·ρ + q·P ρ P on one qubit.

    Raises:
        ParameterError: If q is outside [0, 1] or the Pauli name is unknown.
    """
    if not 0.0 <= probability <= 1.0:
        raise ParameterError(f"channel probability must lie in [0, 1], got {probability}")
    if pauli not in _PAULI:
        raise ParameterError(f"unknown Pauli {pauli!r}")
    if probability == 0.0:
        return state
    flipped = apply_local(state, _PAULI[pauli], (qubit,))
    mat = (1.0 - probability) * state.matrix + probability * flipped
    return DensityOperator._trusted(state.num_qubits, mat)


def local_outcome_distribution(
    state: DensityOperator, ops_per_qubit: Sequence[np.ndarray]
) -> np.ndarray:
    """
    Joint outcome probabilities of independent single-qubit POVMs, one family per qubit.

    Args:
        state (DensityOperator): n-qubit state.
        ops_per_qubit (Sequence[np.ndarray]): For each qubit k an array of shape (m_k, 2, 2)
            stacking its POVM elements.

    Returns:
        np.ndarray: Real array of shape (m_0, ..., m_{n-1}); entry [a_0, ..., a_{n-1}] is
        tr[(E_{a_0} ⊗ ... ⊗ E_{a_{n-1}}) ρ]. Rounding noise below zero is clipped.

    Raises:
        DimensionError: If the number of families or their shapes do not match the state.
    """
    n = state.num_qubits
    if len(ops_per_qubit) != n:
        raise DimensionError(f"expected {n} POVM families, got {len(ops_per_qubit)}")
    operands: list[object] = [state.matrix.reshape([2] * (2 * n)), list(range(2 * n))]
    for k, family in enumerate(ops_per_qubit):
        fam = np.asarray(family, dtype=np.complex128)
        if fam.ndim != 3 or fam.shape[1:] != (2, 2):
            raise DimensionError(f"POVM family for qubit {k} has shape {fam.shape}")
        # tr(E ρ) = Σ E[i, j] ρ[j, i]: E's row index meets ρ's column index.
        operands += [fam, [2 * n + k, n + k, k]]
    out = list(range(2 * n, 3 * n))
    probs = np.einsum(*operands, out, optimize="greedy")
    return np.clip(np.real(probs), 0.0, None)
