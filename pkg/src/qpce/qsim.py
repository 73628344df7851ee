"""Dense statevector and density-matrix engine for registers of up to four qubits.

Qubits are indexed from 0 internally, left to right in ket notation, so the
amplitude of ``|b0 b1 b2>`` lives at index ``b0*4 + b1*2 + b2``.  Reports and
serialized circuits use 1-based wire labels to match particle labels 1, 2, 3;
that translation happens only at the serialization boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

STATE_ATOL = 1e-10
EXACT_ATOL = 1e-12
MAX_QUBITS = 4


class QsimError(ValueError):
    """Invalid register, index or gate."""


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized pure state of ``num_qubits`` qubits.

    Construction copies the amplitudes and freezes them; every operation
    below returns a new instance.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        n = amps.size.bit_length() - 1
        if amps.size < 2 or 1 << n != amps.size:
            raise QsimError(f"amplitude count {amps.size} is not a power of two >= 2")
        if n > MAX_QUBITS:
            raise QsimError(f"{n} qubits exceeds the dense engine limit of {MAX_QUBITS}")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > STATE_ATOL:
            raise QsimError(f"state is not normalized (norm^2 = {norm!r})")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @property
    def num_qubits(self) -> int:
        return self.amplitudes.size.bit_length() - 1

    @classmethod
    def basis(cls, bits: str) -> "StateVector":
        """Computational basis state from a bit string such as ``"001"``."""
        if not bits or set(bits) - {"0", "1"}:
            raise QsimError(f"bad basis label {bits!r}")
        amps = np.zeros(1 << len(bits), dtype=complex)
        amps[int(bits, 2)] = 1.0
        return cls(amps)

    @classmethod
    def from_unnormalized(cls, amplitudes) -> "StateVector":
        amps = np.asarray(amplitudes, dtype=complex)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise QsimError("zero vector cannot be normalized")
        return cls(amps / norm)

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.num_qubits)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def density(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))

    def kron(self, other: "StateVector") -> "StateVector":
        return StateVector(np.kron(self.amplitudes, other.amplitudes))

    def allclose(self, other: "StateVector", atol: float = EXACT_ATOL) -> bool:
        return (self.num_qubits == other.num_qubits
                and np.allclose(self.amplitudes, other.amplitudes, atol=atol, rtol=0))

    def __repr__(self):
        terms = []
        for idx, amp in enumerate(self.amplitudes):
            if abs(amp) > EXACT_ATOL:
                label = format(idx, f"0{self.num_qubits}b")
                terms.append(f"({amp.real:+.6g}{amp.imag:+.6g}j)|{label}>")
        return "StateVector(" + " ".join(terms) + ")"


@dataclass(frozen=True, eq=False)
class Gate:
    """Named single-qubit unitary."""

    name: str
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise QsimError(f"gate {self.name} must be 2x2, got {m.shape}")
        if not np.allclose(m.conj().T @ m, np.eye(2), atol=EXACT_ATOL, rtol=0):
            raise QsimError(f"gate {self.name} is not unitary")
        object.__setattr__(self, "matrix", _frozen(m))

    def dagger(self) -> "Gate":
        return Gate(self.name + "^dag", self.matrix.conj().T)


_SQRT_HALF = 1 / np.sqrt(2)

I = Gate("I", np.eye(2))
X = Gate("X", [[0, 1], [1, 0]])
# |0><1| - |1><0|
IY = Gate("iY", [[0, 1], [-1, 0]])
Z = Gate("Z", [[1, 0], [0, -1]])
H = Gate("H", [[_SQRT_HALF, _SQRT_HALF], [_SQRT_HALF, -_SQRT_HALF]])
S = Gate("S", [[1, 0], [0, 1j]])

GATES = {g.name: g for g in (I, X, IY, Z, H, S)}


def _check_index(state: StateVector, index: int, what: str = "qubit") -> None:
    if not 0 <= index < state.num_qubits:
        raise QsimError(f"{what} index {index} out of range for {state.num_qubits} qubits")


def _apply_on_axis(tensor: np.ndarray, matrix: np.ndarray, axis: int) -> np.ndarray:
    if tensor.ndim == 1:
        return matrix @ tensor
    out = np.tensordot(matrix, tensor, axes=([1], [axis]))
    return np.moveaxis(out, 0, axis)


def apply_gate(state: StateVector, gate: Gate, target: int) -> StateVector:
    """Apply ``gate`` to qubit ``target``."""
    _check_index(state, target, "target")
    out = _apply_on_axis(state.tensor(), gate.matrix, target)
    return StateVector(out.reshape(-1))


def apply_controlled(state: StateVector, gate: Gate, control: int,
                     control_value: int, target: int) -> StateVector:
    """Apply ``gate`` to ``target`` on the branch where ``control`` equals ``control_value``.

    ``control_value=0`` gives an anti-controlled gate.
    """
    _check_index(state, control, "control")
    _check_index(state, target, "target")
    if control == target:
        raise QsimError("control and target must differ")
    if control_value not in (0, 1):
        raise QsimError(f"control_value must be 0 or 1, got {control_value!r}")
    tensor = state.tensor().copy()
    sel = [slice(None)] * state.num_qubits
    sel[control] = control_value
    sel = tuple(sel)
    sub_axis = target - 1 if target > control else target
    tensor[sel] = _apply_on_axis(tensor[sel], gate.matrix, sub_axis)
    return StateVector(tensor.reshape(-1))


@dataclass(frozen=True, eq=False)
class MeasurementRecord:
    qubit_indices: tuple[int, ...]
    outcomes: tuple[int, ...]
    post_state: StateVector

    @property
    def bitstring(self) -> str:
        return "".join(map(str, self.outcomes))


def _check_subset(state: StateVector, qubits: Sequence[int]) -> tuple[int, ...]:
    qubits = tuple(int(q) for q in qubits)
    if len(set(qubits)) != len(qubits):
        raise QsimError(f"duplicate qubit indices {qubits}")
    for q in qubits:
        _check_index(state, q)
    return qubits


def outcome_distribution(state: StateVector, qubits: Sequence[int]) -> np.ndarray:
    """Born probabilities of Z outcomes on ``qubits``.

    Returns a flat array of length ``2**len(qubits)`` indexed by the outcome
    bit pattern read in the order given by ``qubits``.
    """
    qubits = _check_subset(state, qubits)
    probs = np.abs(state.tensor()) ** 2
    others = tuple(q for q in range(state.num_qubits) if q not in qubits)
    marg = probs.sum(axis=others) if others else probs
    # remaining axes are in ascending qubit order; reorder to the requested order
    order = sorted(qubits)
    marg = np.transpose(marg, [order.index(q) for q in qubits])
    return marg.reshape(-1)


def collapse(state: StateVector, qubits: Sequence[int], outcomes: Sequence[int]) -> StateVector:
    """Project onto the given Z outcomes and renormalize."""
    qubits = _check_subset(state, qubits)
    keep = _outcome_mask(state.num_qubits, qubits, tuple(int(b) for b in outcomes))
    return StateVector.from_unnormalized(state.amplitudes * keep)


@lru_cache(maxsize=None)
def _outcome_mask(n: int, qubits: tuple[int, ...], outcomes: tuple[int, ...]) -> np.ndarray:
    idx = np.arange(1 << n)
    keep = np.ones(1 << n, dtype=bool)
    for q, bit in zip(qubits, outcomes):
        keep &= ((idx >> (n - 1 - q)) & 1) == bit
    return _frozen(keep)


def measure_z(state: StateVector, qubits: Sequence[int], rng: np.random.Generator) -> MeasurementRecord:
    """Sample a Z-basis measurement of ``qubits`` and collapse the state."""
    qubits = _check_subset(state, qubits)
    probs = outcome_distribution(state, qubits).tolist()
    u = rng.random() * sum(probs)
    idx, acc = len(probs) - 1, 0.0
    for k, p in enumerate(probs):
        acc += p
        if u < acc:
            idx = k
            break
    bits = tuple(int(b) for b in format(idx, f"0{len(qubits)}b"))
    return MeasurementRecord(qubits, bits, collapse(state, qubits, bits))


def measure_in_basis(state: StateVector, qubit: int, basis: str,
                     rng: np.random.Generator) -> MeasurementRecord:
    """Single-qubit measurement in ``"Z"`` or ``"X"``.

    For X the outcome 0 means ``|+>`` and 1 means ``|->``; the post state holds
    the qubit in the observed eigenstate.
    """
    if basis == "Z":
        return measure_z(state, [qubit], rng)
    if basis != "X":
        raise QsimError(f"unknown basis {basis!r}")
    rec = measure_z(apply_gate(state, H, qubit), [qubit], rng)
    return MeasurementRecord(rec.qubit_indices, rec.outcomes, apply_gate(rec.post_state, H, qubit))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    entries: np.ndarray

    def __post_init__(self):
        rho = np.array(self.entries, dtype=complex)
        dim = rho.shape[0]
        if rho.ndim != 2 or rho.shape != (dim, dim) or dim < 2 or dim & (dim - 1):
            raise QsimError(f"density matrix must be square with power-of-two size, got {rho.shape}")
        if not np.allclose(rho, rho.conj().T, atol=STATE_ATOL, rtol=0):
            raise QsimError("density matrix is not Hermitian")
        if abs(np.trace(rho).real - 1) > STATE_ATOL:
            raise QsimError(f"density matrix trace {np.trace(rho).real!r} != 1")
        if np.linalg.eigvalsh(rho).min() < -STATE_ATOL:
            raise QsimError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "entries", _frozen(rho))

    @property
    def num_qubits(self) -> int:
        return self.entries.shape[0].bit_length() - 1

    @classmethod
    def diagonal(cls, values) -> "DensityMatrix":
        return cls(np.diag(np.asarray(values, dtype=complex)))

    def allclose(self, other: "DensityMatrix", atol: float = EXACT_ATOL) -> bool:
        return (self.entries.shape == other.entries.shape
                and np.allclose(self.entries, other.entries, atol=atol, rtol=0))


def partial_trace(rho: DensityMatrix, keep: Sequence[int]) -> DensityMatrix:
    """Trace out every qubit not in ``keep``; kept qubits stay in the given order."""
    n = rho.num_qubits
    keep = tuple(int(q) for q in keep)
    if not keep:
        raise QsimError("keep set must be nonempty")
    if len(set(keep)) != len(keep) or any(not 0 <= q < n for q in keep):
        raise QsimError(f"bad keep indices {keep} for {n} qubits")
    tensor = rho.entries.reshape((2,) * (2 * n))
    width = n
    for q in sorted(set(range(n)) - set(keep), reverse=True):
        tensor = np.trace(tensor, axis1=q, axis2=q + width)
        width -= 1
    order = sorted(keep)
    perm = [order.index(q) for q in keep]
    tensor = np.transpose(tensor, perm + [p + width for p in perm])
    dim = 1 << width
    return DensityMatrix(tensor.reshape(dim, dim))


def reduced_state(state: StateVector, keep: Sequence[int]) -> DensityMatrix:
    return partial_trace(state.density(), keep)


def trace_norm(rho0: DensityMatrix, rho1: DensityMatrix) -> float:
    """Trace norm of the Hermitian difference, from its eigenvalues."""
    if rho0.entries.shape != rho1.entries.shape:
        raise QsimError(f"dimension mismatch {rho0.entries.shape} vs {rho1.entries.shape}")
    diff = rho0.entries - rho1.entries
    return float(np.abs(np.linalg.eigvalsh(diff)).sum())


def helstrom(rho0: DensityMatrix, rho1: DensityMatrix) -> float:
    """Optimal success probability for telling two equiprobable states apart."""
    return 0.5 + 0.25 * trace_norm(rho0, rho1)


def fidelity(a: StateVector, b: StateVector) -> float:
    if a.num_qubits != b.num_qubits:
        raise QsimError(f"dimension mismatch {a.num_qubits} vs {b.num_qubits} qubits")
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)
