"""Closed-form leak bounds, Monte Carlo leak estimates and exact correctness scans.

A dishonest receiver who intercepts the travelling particle and wants the
sender's bit faces two reduced states ``rho0`` / ``rho1``.  For every resource
here those states are diagonal once the announced H correction is applied, so
a Z measurement followed by a maximum-likelihood guess already reaches the
Helstrom optimum; no POVM search is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

import numpy as np
from scipy import stats

from .protocol import ENCODINGS, RESOURCES, encode_secret_bit
from .qsim import DensityMatrix, H, StateVector, apply_gate, helstrom, outcome_distribution, reduced_state
from .states import make_epr, make_symmetric_w, make_w1, make_w1_prime

# name -> (state, travel qubit, receiver applies H before measuring)
LEAK_RESOURCES: dict[str, tuple[StateVector, int, bool]] = {
    "W1": (make_w1(), 2, False),
    "W1p": (make_w1_prime(), 2, True),
    "symmetric_W": (make_symmetric_w("phi1"), 2, False),
    "phi2": (make_symmetric_w("phi2"), 2, True),
    "EPR": (make_epr(), 1, False),
}
# carrier families as a protocol run draws them
RESOURCE_FAMILIES = {
    "W1": ("W1", "W1p"),
    "symmetric_W": ("symmetric_W", "phi2"),
    "EPR": ("EPR",),
}


def _resource(name: str) -> tuple[StateVector, int, bool]:
    try:
        return LEAK_RESOURCES[name]
    except KeyError:
        raise ValueError(f"unknown resource {name!r}; expected one of {tuple(LEAK_RESOURCES)}") from None


def encoded_reduced_states(resource: str, encoding: str) -> tuple[DensityMatrix, DensityMatrix]:
    """Reduced state of the travelling particle for secret bit 0 and bit 1."""
    state, travel, _ = _resource(resource)
    return tuple(reduced_state(encode_secret_bit(state, bit, encoding, travel), [travel])
                 for bit in (0, 1))


def leak_bound(resource: str, encoding: str) -> float:
    return helstrom(*encoded_reduced_states(resource, encoding))


def aligned_z_distribution(resource: str, encoding: str, bit: int) -> np.ndarray:
    """P(Z outcome) on the travelling particle after the receiver's announced correction."""
    state, travel, rotated = _resource(resource)
    state = encode_secret_bit(state, bit, encoding, travel)
    if rotated:
        state = apply_gate(state, H, travel)
    return outcome_distribution(state, [travel])


def ml_guess_table(resource: str, encoding: str) -> tuple[np.ndarray, np.ndarray]:
    """Per-bit outcome distributions and the maximum-likelihood guess per outcome.

    Ties go to guessing 0.
    """
    dist = np.array([aligned_z_distribution(resource, encoding, b) for b in (0, 1)])
    guess = (dist[1] > dist[0] + 1e-12).astype(np.uint8)
    return dist, guess


def simulate_guesses(resources: Sequence[str], encoding: str, trials: int,
                     rng: np.random.Generator) -> int:
    """Count correct guesses of a uniform secret bit over ``trials`` interceptions.

    Each trial draws the carrier uniformly from ``resources`` and the bit
    uniformly, samples the Z outcome from the Born probabilities of the
    encoded, aligned carrier, and applies the maximum-likelihood guess.
    """
    tables = [ml_guess_table(r, encoding) for r in resources]
    kinds = rng.integers(len(resources), size=trials)
    bits = rng.integers(0, 2, size=trials)
    u = rng.random(trials)
    correct = 0
    for k, (dist, guess) in enumerate(tables):
        for b in (0, 1):
            sel = (kinds == k) & (bits == b)
            outcomes = (u[sel] >= dist[b][0]).astype(np.int64)
            correct += int(np.count_nonzero(guess[outcomes] == b))
    return correct


@dataclass
class LeakReport:
    resource: str
    encoding: str
    rho0: DensityMatrix
    rho1: DensityMatrix
    bound: float
    empirical: float
    trials: int

    @property
    def sigma(self) -> float:
        return math.sqrt(self.bound * (1 - self.bound) / self.trials)

    def within(self, n_sigma: float = 3.0) -> bool:
        return abs(self.empirical - self.bound) <= n_sigma * self.sigma

    def to_dict(self) -> dict:
        def mat(rho):
            return [[[round(float(v.real), 12), round(float(v.imag), 12)] for v in row]
                    for row in rho.entries]
        return {"resource": self.resource, "encoding": self.encoding, "bound": self.bound,
                "empirical": self.empirical, "trials": self.trials, "sigma": self.sigma,
                "within_3_sigma": self.within(), "rho0": mat(self.rho0), "rho1": mat(self.rho1)}


def leak_monte_carlo(resource: str, encoding: str, trials: int,
                     rng: np.random.Generator) -> LeakReport:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rho0, rho1 = encoded_reduced_states(resource, encoding)
    correct = simulate_guesses([resource], encoding, trials, rng)
    return LeakReport(resource, encoding, rho0, rho1, helstrom(rho0, rho1), correct / trials, trials)


# -- exhaustive outcome table ----------------------------------------------------

@dataclass(frozen=True)
class ScanRow:
    x: int
    y: int
    kind_a: str
    kind_b: str
    m_a1: str
    m_b2: str
    m_b1: str
    m_a2: str
    c_a1: int
    c_b2: int
    c_b1: int
    c_a2: int
    c_a: int
    c_b: int
    c: int
    probability: float

    @property
    def consistent(self) -> bool:
        return self.c == self.x ^ self.y


@dataclass
class CorrectnessScan:
    variant: str
    encoding: str
    rows: list[ScanRow] = field(default_factory=list)

    def mismatches(self) -> list[ScanRow]:
        return [r for r in self.rows if not r.consistent]

    def cell_totals(self) -> dict[tuple, float]:
        totals: dict[tuple, float] = {}
        for r in self.rows:
            key = (r.x, r.y, r.kind_a, r.kind_b)
            totals[key] = totals.get(key, 0.0) + r.probability
        return totals

    def to_dict(self) -> dict:
        return {"variant": self.variant, "encoding": self.encoding,
                "rows": [vars(r) | {"consistent": r.consistent} for r in self.rows]}


def _party_branches(variant: str, kind: str, bit: int, encoding: str):
    """Outcome branches of one carrier after encoding and the receiver's correction."""
    res = RESOURCES[variant]
    state = encode_secret_bit(res.states[kind], bit, encoding, res.travel_qubit)
    if kind in res.rotated:
        state = apply_gate(state, H, res.travel_qubit)
    qubits = list(res.pair_qubits) + [res.travel_qubit]
    probs = outcome_distribution(state, qubits)
    width = len(qubits)
    for idx, p in enumerate(probs):
        if p > 1e-15:
            bits = format(idx, f"0{width}b")
            yield bits[:-1], bits[-1], float(p)


def correctness_scan(variant: str = "AW", encoding: str = "i_sigma_y") -> CorrectnessScan:
    """Enumerate every bit pair, carrier-kind pair and measurement branch exactly."""
    if encoding not in ENCODINGS:
        raise ValueError(f"unknown encoding {encoding!r}")
    res = RESOURCES[variant]
    scan = CorrectnessScan(variant, encoding)
    for x, y, ka, kb in product((0, 1), (0, 1), res.kinds, res.kinds):
        for (pa, ta, prob_a), (pb, tb, prob_b) in product(
                list(_party_branches(variant, ka, x, encoding)),
                list(_party_branches(variant, kb, y, encoding))):
            c_a1, c_b1 = int("1" in pa), int("1" in pb)
            c_b2, c_a2 = int(tb), int(ta)
            c_a, c_b = c_a1 ^ c_b2, c_b1 ^ c_a2
            scan.rows.append(ScanRow(x, y, ka, kb, pa, tb, pb, ta, c_a1, c_b2, c_b1, c_a2,
                                     c_a, c_b, c_a ^ c_b, prob_a * prob_b))
    return scan


TABLE_COLUMNS = ("x", "y", "M^A1", "M^B2", "M^B1", "M^A2",
                 "C^A1", "C^B2", "C^B1", "C^A2", "C^A", "C^B", "C")


def _pair_label(outcome: str) -> str:
    if len(outcome) == 1:
        return f"|{outcome}>"
    return "|00>" if outcome == "00" else "|01>or|10>"


def table1_rows(scan: CorrectnessScan) -> list[dict]:
    """Collapse the scan to distinct rows in the published column layout.

    Carrier kinds and the ``|01>``/``|10>`` split are folded together.  The
    ``probability`` field (not a published column) is the chance of the row
    given ``(x, y)`` with carrier kinds drawn uniformly.
    """
    n_kind_pairs = len(RESOURCES[scan.variant].kinds) ** 2
    merged: dict[tuple, float] = {}
    for r in scan.rows:
        key = (r.x, r.y, _pair_label(r.m_a1), f"|{r.m_b2}>", _pair_label(r.m_b1), f"|{r.m_a2}>",
               r.c_a1, r.c_b2, r.c_b1, r.c_a2, r.c_a, r.c_b, r.c)
        merged[key] = merged.get(key, 0.0) + r.probability / n_kind_pairs
    rows = []
    for key in sorted(merged):
        row = dict(zip(TABLE_COLUMNS, key))
        row["probability"] = round(merged[key], 12)
        row["consistent"] = row["C"] == row["x"] ^ row["y"]
        rows.append(row)
    return rows


def render_table(rows: list[dict]) -> str:
    header = list(TABLE_COLUMNS) + ["P"]
    body = [[str(r[c]) for c in TABLE_COLUMNS] + [f"{r['probability']:.4f}"] for r in rows]
    widths = [max(len(h), *(len(b[i]) for b in body)) if body else len(h)
              for i, h in enumerate(header)]

    def fmt(cells):
        return "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()

    lines = [fmt(header), fmt(["-" * w for w in widths])]
    for row, cells in zip(rows, body):
        line = fmt(cells)
        if not row["consistent"]:
            line += "   <-- C != x XOR y"
        lines.append(line)
    return "\n".join(lines)


# -- what R' alone tells TP -------------------------------------------------------

def r_prime_side_channel(n_bits: int, mix_length: int) -> dict:
    """Exact leakage of the broadcast ``R'`` about equality.

    Assumes a 50% prior on equality and, when unequal, a uniformly random pair
    of distinct ``n_bits`` secrets.  Returns ``P(R'=0 | equal)`` and the
    accuracy of the Bayes-optimal equality guess from ``R'`` alone.
    """
    mix = stats.binom.pmf(np.arange(mix_length + 1), mix_length, 0.5)
    hamming = np.array([math.comb(n_bits, k) for k in range(n_bits + 1)], dtype=float)
    hamming[0] = 0.0
    hamming /= hamming.sum()
    p_eq = np.zeros(n_bits + mix_length + 1)
    p_eq[:mix_length + 1] = mix
    p_neq = np.convolve(hamming, mix)
    return {
        "p_r_prime_zero_given_equal": float(mix[0]),
        "p_r_prime_zero": float(0.5 * mix[0]),
        "bayes_accuracy": float(0.5 * np.maximum(p_eq, p_neq).sum()),
        "p_r_prime_given_equal": p_eq.tolist(),
        "p_r_prime_given_unequal": p_neq.tolist(),
    }
