"""Quantum resources used by the comparison protocols.

Covers the asymmetric three-qubit W family, the symmetric W pair, the EPR
carrier and the four decoy photons.  Also builds a preparation circuit for
``|W_1>`` and runs a Clifford reachability search showing that
``|W_1>`` cannot be prepared with NOT, CNOT and H alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .qsim import (EXACT_ATOL, GATES, H, StateVector, X, apply_controlled,
                   apply_gate, fidelity)

_S2 = math.sqrt(2)

DECOY_KINDS = ("zero", "one", "plus", "minus")
# decoy kind -> (basis, eigenvalue bit) it is checked in
DECOY_BASIS = {"zero": ("Z", 0), "one": ("Z", 1), "plus": ("X", 0), "minus": ("X", 1)}


@dataclass(frozen=True)
class WStateParams:
    n: float = 1.0
    gamma: float = 0.0
    delta: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.n) and self.n >= 0):
            raise ValueError(f"asymmetry parameter n must be finite and >= 0, got {self.n!r}")
        if not (math.isfinite(self.gamma) and math.isfinite(self.delta)):
            raise ValueError("phases must be finite")


def _ket3(terms: dict[str, complex]) -> StateVector:
    amps = np.zeros(8, dtype=complex)
    for label, amp in terms.items():
        amps[int(label, 2)] += amp
    return StateVector(amps)


def make_wn(params: WStateParams = WStateParams()) -> StateVector:
    """Asymmetric W state with weights 1 : n : n+1 on ``|100>, |010>, |001>``."""
    n = params.n
    scale = 1 / math.sqrt(2 + 2 * n)
    return _ket3({
        "100": scale,
        "010": scale * math.sqrt(n) * np.exp(1j * params.gamma),
        "001": scale * math.sqrt(n + 1) * np.exp(1j * params.delta),
    })


def make_w1() -> StateVector:
    return make_wn(WStateParams(1.0, 0.0, 0.0))


def _plus_minus(third: str) -> np.ndarray:
    return np.array([1, 1 if third == "+" else -1], dtype=complex) / _S2


def _ket_with_pm(terms: list[tuple[complex, str, str]]) -> StateVector:
    # terms of the form amp * |ab>|±>
    amps = np.zeros(8, dtype=complex)
    for amp, pair, third in terms:
        amps += amp * np.kron(StateVector.basis(pair).amplitudes, _plus_minus(third))
    return StateVector(amps)


def make_w1_prime() -> StateVector:
    """``(|10+> + |01+> + sqrt2 |00->) / 2``, built directly from its expansion."""
    return _ket_with_pm([(0.5, "10", "+"), (0.5, "01", "+"), (_S2 / 2, "00", "-")])


def make_symmetric_w(variant: str = "phi1") -> StateVector:
    if variant == "phi1":
        return _ket3({"100": 1 / math.sqrt(3), "010": 1 / math.sqrt(3), "001": 1 / math.sqrt(3)})
    if variant == "phi2":
        c = 1 / math.sqrt(3)
        return _ket_with_pm([(c, "10", "+"), (c, "01", "+"), (c, "00", "-")])
    raise ValueError(f"unknown symmetric W variant {variant!r}")


def make_epr() -> StateVector:
    """``(|01> + |10>) / sqrt2``; particle 2 is the one that travels."""
    return StateVector(np.array([0, 1, 1, 0], dtype=complex) / _S2)


def make_decoy(kind: str) -> StateVector:
    if kind == "zero":
        return StateVector.basis("0")
    if kind == "one":
        return StateVector.basis("1")
    if kind == "plus":
        return StateVector(_plus_minus("+"))
    if kind == "minus":
        return StateVector(_plus_minus("-"))
    raise ValueError(f"unknown decoy kind {kind!r}")


# -- preparation circuit ------------------------------------------------------

@dataclass(frozen=True)
class CircuitStep:
    gate: str
    target: int
    control: int | None = None
    control_value: int = 1

    def to_dict(self) -> dict:
        # wires are reported 1-based (particle labels)
        return {
            "gate": self.gate,
            "control": None if self.control is None else self.control + 1,
            "control_value": None if self.control is None else self.control_value,
            "target": self.target + 1,
        }

    def describe(self) -> str:
        if self.control is None:
            return f"{self.gate}(q{self.target + 1})"
        prefix = "anti-controlled-" if self.control_value == 0 else "controlled-"
        name = "NOT" if self.gate == "X" else self.gate
        if self.gate == "X" and self.control_value == 1:
            return f"CNOT(q{self.control + 1} -> q{self.target + 1})"
        return f"{prefix}{name}(q{self.control + 1}={self.control_value} -> q{self.target + 1})"


@dataclass(frozen=True)
class CircuitDescription:
    num_qubits: int
    steps: tuple[CircuitStep, ...]
    label: str = ""

    def __post_init__(self):
        for step in self.steps:
            wires = [step.target] + ([] if step.control is None else [step.control])
            if any(not 0 <= w < self.num_qubits for w in wires):
                raise ValueError(f"step {step} references a wire outside {self.num_qubits} qubits")
            if step.gate not in GATES:
                raise ValueError(f"unknown gate {step.gate!r}")

    def to_json(self) -> list[dict]:
        return [step.to_dict() for step in self.steps]


def replay(circuit: CircuitDescription, initial: StateVector | None = None,
           upto: int | None = None) -> StateVector:
    state = initial or StateVector.basis("0" * circuit.num_qubits)
    for step in circuit.steps[:upto]:
        gate = GATES[step.gate]
        if step.control is None:
            state = apply_gate(state, gate, step.target)
        else:
            state = apply_controlled(state, gate, step.control, step.control_value, step.target)
    return state


def w1_circuit() -> CircuitDescription:
    """Four-step circuit taking ``|000>`` to ``|W_1>``.

    H on particle 3 splits the weight 1/2 : 1/2; on the particle-3 = 0 branch a
    controlled-H spreads it over particle 1, the CNOT copies particle 1 onto
    particle 2, and an anti-controlled NOT turns ``|000>, |110>`` into
    ``|010>, |100>``.  The controlled-H is essential, see ``stabilizer_check``.
    """
    return CircuitDescription(3, (
        CircuitStep("H", target=2),
        CircuitStep("H", target=0, control=2, control_value=0),
        CircuitStep("X", target=1, control=0, control_value=1),
        CircuitStep("X", target=1, control=2, control_value=0),
    ), label="W1")


def elementary_steps(circuit: CircuitDescription) -> tuple[CircuitStep, ...]:
    """Rewrite anti-controls as X-conjugated controls and cancel adjacent X pairs.

    Two X gates on the same wire cancel when every step between them leaves
    that wire untouched.
    """
    expanded: list[CircuitStep] = []
    for step in circuit.steps:
        if step.control is not None and step.control_value == 0:
            flip = CircuitStep("X", target=step.control)
            expanded += [flip, CircuitStep(step.gate, step.target, step.control, 1), flip]
        else:
            expanded.append(step)

    def touches(step: CircuitStep, wire: int) -> bool:
        return step.target == wire or step.control == wire

    changed = True
    while changed:
        changed = False
        for i, step in enumerate(expanded):
            if step.gate != "X" or step.control is not None:
                continue
            for j in range(i + 1, len(expanded)):
                other = expanded[j]
                if other.gate == "X" and other.control is None and other.target == step.target:
                    del expanded[j], expanded[i]
                    changed = True
                    break
                if touches(other, step.target):
                    break
            if changed:
                break
    return tuple(expanded)


# -- Clifford reachability ------------------------------------------------------

def _canonical_key(state: StateVector, decimals: int = 9) -> tuple:
    amps = state.amplitudes
    lead = amps[np.flatnonzero(np.abs(amps) > 1e-9)[0]]
    amps = amps * (abs(lead) / lead)
    amps = np.round(amps, decimals) + 0.0  # drop negative zeros
    return tuple(np.concatenate([amps.real, amps.imag]))


def _clifford_moves(num_qubits: int, gate_set: tuple[str, ...]):
    moves = []
    for q in range(num_qubits):
        for name in gate_set:
            if name in ("X", "H", "S"):
                moves.append((name, GATES[name], q))
    if "CNOT" in gate_set:
        for c in range(num_qubits):
            for t in range(num_qubits):
                if c != t:
                    moves.append((f"CNOT{c}{t}", (c, t), None))
    return moves


def _apply_move(state: StateVector, move) -> StateVector:
    _, op, q = move
    if q is None:
        control, target = op
        return apply_controlled(state, X, control, 1, target)
    return apply_gate(state, op, q)


@dataclass
class ReachabilityResult:
    gate_set: tuple[str, ...]
    states: list[StateVector]
    closure_depth: int
    closed: bool
    depth_histogram: list[int] = field(default_factory=list)

    def best_fidelity(self, target: StateVector) -> float:
        return max(fidelity(s, target) for s in self.states)

    def all_uniform_magnitude(self, atol: float = 1e-9) -> bool:
        for s in self.states:
            mags = np.abs(s.amplitudes)
            nz = mags[mags > atol]
            if np.ptp(nz) > atol:
                return False
        return True


def clifford_reachable(num_qubits: int = 3, gate_set: tuple[str, ...] = ("X", "CNOT", "H"),
                       max_depth: int | None = None) -> ReachabilityResult:
    """Breadth-first search of every state reachable from ``|0...0>``.

    Stops at closure (no new states at the next depth) or at ``max_depth``.
    """
    start = StateVector.basis("0" * num_qubits)
    seen = {_canonical_key(start): start}
    frontier = [start]
    histogram = [1]
    moves = _clifford_moves(num_qubits, gate_set)
    depth = 0
    closed = False
    while max_depth is None or depth < max_depth:
        nxt = []
        for state in frontier:
            for move in moves:
                new = _apply_move(state, move)
                key = _canonical_key(new)
                if key not in seen:
                    seen[key] = new
                    nxt.append(new)
        if not nxt:
            closed = True
            break
        depth += 1
        histogram.append(len(nxt))
        frontier = nxt
    else:
        closed = _is_closed(frontier, moves, seen)
    return ReachabilityResult(tuple(gate_set), list(seen.values()), depth, closed, histogram)


def _is_closed(frontier, moves, seen) -> bool:
    for state in frontier:
        for move in moves:
            if _canonical_key(_apply_move(state, move)) not in seen:
                return False
    return True


def stabilizer_check(max_depth: int | None = 12) -> dict:
    """Report whether ``|W_1>`` shows up among {NOT, CNOT, H}-reachable 3-qubit states."""
    w1 = make_w1()
    result = clifford_reachable(3, ("X", "CNOT", "H"), max_depth=max_depth)
    key = _canonical_key(w1)
    reachable = any(_canonical_key(s) == key for s in result.states)
    mags = sorted({round(float(m), 12) for m in np.abs(w1.amplitudes) if m > EXACT_ATOL})
    return {
        "gate_set": list(result.gate_set),
        "max_depth": max_depth,
        "closure_depth": result.closure_depth,
        "closed": result.closed,
        "reachable_states": len(result.states),
        "all_uniform_magnitude": result.all_uniform_magnitude(),
        "w1_magnitudes": mags,
        "w1_reachable": reachable,
        "best_fidelity_to_w1": round(result.best_fidelity(w1), 12),
    }
