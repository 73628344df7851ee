"""Party state machines for quantum private comparison of equality.

Three variants share one driver:

``AW``
    Asymmetric W carriers chosen from ``{|W_1>, |W'_1>}``; the mix-up
    sequences and the insertion positions travel encrypted under ``K_AB``.
``LWJ11``
    Symmetric W carriers ``{|phi_1>, |phi_2>}``; mix-up sequences and positions
    travel in the clear.  Channel checking uses decoy photons here as well.
``LWG12``
    EPR carriers ``(|01>+|10>)/sqrt2`` with particle 2 travelling; classical
    part identical to LWJ11.

Every run is driven by :func:`run_protocol`, which returns the verdict, an
append-only :class:`Transcript` (the adversary's view) and what TP decrypted.
Secret integers map to bits little-endian: bit ``i`` is the coefficient of
``2**i``.

The decoy check happens before the initial-state announcements and the
receiver's H corrections, because a receiver cannot single out which particles
to rotate until the decoy positions are known.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import crypto
from .crypto import ClassicalMessage, SharedKey
from .qsim import H, IY, X, Gate, StateVector, apply_gate, measure_in_basis, measure_z
from .states import (DECOY_BASIS, DECOY_KINDS, make_decoy, make_epr, make_symmetric_w,
                     make_w1, make_w1_prime)

VARIANTS = ("AW", "LWJ11", "LWG12")
ENCODINGS: dict[str, Gate] = {"i_sigma_y": IY, "sigma_x": X}
DIRECTIONS = ("A->B", "B->A")
R_PRIME_BITS = 32

EQUAL, NOT_EQUAL, ABORTED = "equal", "not_equal", "aborted_eavesdrop"

# transcript labels
LBL_ANNOUNCE = "initial-state announcement"
LBL_DECOY_REVEAL = "decoy reveal"
LBL_DECOY_OUTCOMES = "decoy outcomes"
LBL_MIX_A, LBL_MIX_B = "C'_A", "C'_B"
LBL_POSITIONS = "S_q"
LBL_MERGED_A, LBL_MERGED_B = "C''_A", "C''_B"
LBL_R_PRIME = "R'"


class ConfigError(ValueError):
    pass


class ProtocolIntegrityError(RuntimeError):
    """A state the noiseless protocol can never reach; points at a simulator bug."""


@dataclass(frozen=True)
class Resource:
    name: str
    kinds: tuple[str, ...]
    rotated: frozenset[str]
    pair_qubits: tuple[int, ...]
    travel_qubit: int
    states: dict[str, StateVector] = field(repr=False, compare=False)


RESOURCES = {
    "AW": Resource("asymmetric W", ("W1", "W1p"), frozenset({"W1p"}), (0, 1), 2,
                   {"W1": make_w1(), "W1p": make_w1_prime()}),
    "LWJ11": Resource("symmetric W", ("phi1", "phi2"), frozenset({"phi2"}), (0, 1), 2,
                      {"phi1": make_symmetric_w("phi1"), "phi2": make_symmetric_w("phi2")}),
    "LWG12": Resource("EPR", ("EPR",), frozenset(), (0,), 1, {"EPR": make_epr()}),
}

_DECOY_STATES = {kind: make_decoy(kind) for kind in DECOY_KINDS}


@dataclass(frozen=True)
class ProtocolConfig:
    variant: str = "AW"
    n_bits: int = 8
    mix_length: int = 8
    decoy_count: int = 8
    encoding: str = "i_sigma_y"
    error_threshold: float = 0.0
    seed: int = 0
    allow_degenerate: bool = False

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ConfigError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.encoding not in ENCODINGS:
            raise ConfigError(f"encoding must be one of {tuple(ENCODINGS)}, got {self.encoding!r}")
        if self.n_bits < 1:
            raise ConfigError(f"bit length must be >= 1, got {self.n_bits}")
        if self.mix_length < 1 and not (self.allow_degenerate and self.mix_length == 0):
            raise ConfigError(f"mix length must be >= 1, got {self.mix_length}")
        if self.decoy_count < 0:
            raise ConfigError(f"decoy count must be >= 0, got {self.decoy_count}")
        if not 0 <= self.error_threshold < 1:
            raise ConfigError(f"error threshold must be in [0, 1), got {self.error_threshold}")

    @property
    def resource(self) -> Resource:
        return RESOURCES[self.variant]

    @property
    def protects_mix(self) -> bool:
        return self.variant == "AW"

    def to_dict(self) -> dict:
        return {
            "variant": self.variant, "n_bits": self.n_bits, "mix_length": self.mix_length,
            "decoy_count": self.decoy_count, "encoding": self.encoding,
            "error_threshold": self.error_threshold, "seed": self.seed,
        }


def required_key_bits(config: ProtocolConfig) -> dict[str, int]:
    """Key material each pair needs for one run, fixed before the run starts."""
    n, l = config.n_bits, config.mix_length
    merged = n + l
    sizes = {"K_AT": merged, "K_BT": merged}
    if config.protects_mix:
        sq = crypto.POSITION_COUNT_BITS + l * crypto.position_width(merged)
        sizes = {"K_AB": 2 * l + sq, **sizes}
    return sizes


def secret_to_bits(value: int, n_bits: int) -> np.ndarray:
    if value < 0 or value >> n_bits:
        raise ConfigError(f"secret {value} does not fit in {n_bits} bits")
    return np.array([(value >> i) & 1 for i in range(n_bits)], dtype=np.uint8)


# -- quantum bookkeeping ------------------------------------------------------

class Register:
    """Mutable slot holding the joint state of one carrier or decoy."""

    __slots__ = ("state",)

    def __init__(self, state: StateVector):
        self.state = state


@dataclass(eq=False)
class Photon:
    register: Register
    qubit: int

    def apply(self, gate: Gate) -> None:
        self.register.state = apply_gate(self.register.state, gate, self.qubit)

    def measure(self, basis: str, rng: np.random.Generator) -> int:
        rec = measure_in_basis(self.register.state, self.qubit, basis, rng)
        self.register.state = rec.post_state
        return rec.outcomes[0]


@dataclass(frozen=True)
class DecoyBook:
    positions: tuple[int, ...]
    kinds: tuple[str, ...]
    sequence_length: int

    def reveal_bits(self) -> np.ndarray:
        """Positions followed by one basis bit per decoy (0 = Z, 1 = X)."""
        pos = crypto.encode_positions(self.positions, self.sequence_length)
        bases = [0 if DECOY_BASIS[k][0] == "Z" else 1 for k in self.kinds]
        return np.concatenate([pos, np.array(bases, dtype=np.uint8)])


@dataclass
class PartyState:
    id: str
    secret: np.ndarray
    kinds: list[str] = field(default_factory=list)
    registers: list[Register] = field(default_factory=list)
    decoy_book: DecoyBook | None = None
    received: list[Photon] = field(default_factory=list)
    pair_outcomes: list[str] = field(default_factory=list)
    third_outcomes: list[int] = field(default_factory=list)
    c1: np.ndarray | None = None
    c2: np.ndarray | None = None
    c: np.ndarray | None = None
    mix: np.ndarray | None = None
    peer_mix: np.ndarray | None = None
    positions: list[int] | None = None
    merged: np.ndarray | None = None


# -- transcript and reports ---------------------------------------------------

@dataclass
class Transcript:
    classical: list[ClassicalMessage] = field(default_factory=list)
    quantum: list[dict] = field(default_factory=list)
    events: list[dict] = field(default_factory=list)
    _seq: int = 0

    def _next(self) -> int:
        self._seq += 1
        return self._seq - 1

    def send(self, message: ClassicalMessage) -> ClassicalMessage:
        message.seq = self._next()
        self.classical.append(message)
        return message

    def transmit(self, sender: str, receiver: str, count: int) -> None:
        self.quantum.append({"seq": self._next(), "sender": sender, "receiver": receiver,
                             "particles": count})

    def event(self, kind: str, **data) -> None:
        self.events.append({"seq": self._next(), "kind": kind, **data})

    def messages(self, label: str) -> list[ClassicalMessage]:
        return [m for m in self.classical if m.label == label]

    def labels(self, encrypted: bool | None = None) -> set[str]:
        return {m.label for m in self.classical if encrypted is None or m.encrypted == encrypted}

    def to_dict(self) -> dict:
        return {"classical": [m.to_dict() for m in self.classical],
                "quantum": list(self.quantum), "events": list(self.events)}

    @classmethod
    def from_dict(cls, data: dict) -> "Transcript":
        t = cls([ClassicalMessage.from_dict(m) for m in data["classical"]],
                list(data["quantum"]), list(data["events"]))
        t._seq = 1 + max([m.seq for m in t.classical] + [q["seq"] for q in t.quantum]
                         + [e["seq"] for e in t.events] + [-1])
        return t


@dataclass
class BitRecord:
    index: int
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


@dataclass
class ComparisonReport:
    verdict: str
    r: int | None
    r_prime: int | None
    per_bit: list[BitRecord] = field(default_factory=list)
    error_rates: dict[str, float] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def aborted(self) -> bool:
        return self.verdict == ABORTED

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict, "R": self.r, "R_prime": self.r_prime,
            "error_rates": dict(self.error_rates), "notes": list(self.notes),
            "per_bit": [vars(b) for b in self.per_bit],
        }


@dataclass
class ProtocolRun:
    config: ProtocolConfig
    x: int
    y: int
    report: ComparisonReport
    transcript: Transcript
    tp_view: dict = field(default_factory=dict)
    parties: dict[str, PartyState] = field(default_factory=dict, repr=False)

    def to_dict(self, include_transcript: bool = True) -> dict:
        out = {"config": self.config.to_dict(), "report": self.report.to_dict()}
        if include_transcript:
            out["transcript"] = self.transcript.to_dict()
            out["tp_view"] = {k: crypto.bits_to_hex(v) if isinstance(v, np.ndarray) else v
                              for k, v in self.tp_view.items()}
        return out

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(**kwargs), indent=2)


# -- protocol steps -------------------------------------------------------------

def encode_secret_bit(state: StateVector, bit: int, encoding: str, travel_qubit: int = 2) -> StateVector:
    """Identity for bit 0, the encoding operator on the travelling particle for bit 1."""
    if not bit:
        return state
    return apply_gate(state, ENCODINGS[encoding], travel_qubit)


def step1_prepare(party: PartyState, config: ProtocolConfig, rng: np.random.Generator,
                  forced_kinds: Sequence[str] | None = None) -> tuple[list[Photon], DecoyBook]:
    """Prepare, encode and ship the travelling particles with decoys mixed in."""
    res = config.resource
    n, d = config.n_bits, config.decoy_count
    if party.secret.size != n:
        raise ConfigError(f"{party.id}'s secret has {party.secret.size} bits, expected {n}")
    if forced_kinds is not None:
        kinds = list(forced_kinds)
        if len(kinds) != n or set(kinds) - set(res.kinds):
            raise ConfigError(f"forced kinds must be {n} entries from {res.kinds}")
    elif len(res.kinds) == 1:
        kinds = [res.kinds[0]] * n
    else:
        kinds = [res.kinds[k] for k in rng.integers(len(res.kinds), size=n)]
    party.kinds = kinds
    party.registers = [
        Register(encode_secret_bit(res.states[k], int(b), config.encoding, res.travel_qubit))
        for k, b in zip(kinds, party.secret)
    ]

    positions = tuple(sorted(int(p) for p in rng.choice(n + d, size=d, replace=False)))
    decoy_kinds = tuple(DECOY_KINDS[k] for k in rng.integers(4, size=d))
    book = DecoyBook(positions, decoy_kinds, n + d)
    party.decoy_book = book

    carriers = iter(Photon(r, res.travel_qubit) for r in party.registers)
    decoys = iter(Photon(Register(_DECOY_STATES[k]), 0) for k in decoy_kinds)
    slots = set(positions)
    outbound = [next(decoys) if i in slots else next(carriers) for i in range(n + d)]
    return outbound, book


def check_decoys(inbound: Sequence[Photon], book: DecoyBook,
                 rng: np.random.Generator) -> tuple[float, list[int]]:
    """Measure each decoy in its preparation basis; return error rate and outcomes."""
    outcomes = []
    errors = 0
    for pos, kind in zip(book.positions, book.kinds):
        basis, expected = DECOY_BASIS[kind]
        bit = inbound[pos].measure(basis, rng)
        outcomes.append(bit)
        errors += bit != expected
    rate = errors / len(book.positions) if book.positions else 0.0
    return rate, outcomes


def strip_decoys(inbound: Sequence[Photon], book: DecoyBook) -> list[Photon]:
    slots = set(book.positions)
    return [p for i, p in enumerate(inbound) if i not in slots]


def align_received(photons: Sequence[Photon], announced_kinds: Sequence[str],
                   resource: Resource) -> None:
    """H on every received particle whose announced initial state is the rotated kind."""
    for photon, kind in zip(photons, announced_kinds):
        if kind in resource.rotated:
            photon.apply(H)


@dataclass
class Step2Result:
    aligned: list[Photon] | None
    error_rate: float
    decoy_outcomes: list[int]

    @property
    def aborted(self) -> bool:
        return self.aligned is None


def step2_check_and_align(receiver: PartyState, inbound: Sequence[Photon],
                          announcements: Sequence[str], decoy_reveal: DecoyBook,
                          config: ProtocolConfig, rng: np.random.Generator) -> Step2Result:
    """Check one channel direction, then drop decoys and apply the announced H corrections."""
    rate, outcomes = check_decoys(inbound, decoy_reveal, rng)
    if rate > config.error_threshold:
        return Step2Result(None, rate, outcomes)
    cleaned = strip_decoys(inbound, decoy_reveal)
    align_received(cleaned, announcements, config.resource)
    receiver.received = cleaned
    return Step2Result(cleaned, rate, outcomes)


def pair_bit(outcome: Sequence[int]) -> int:
    """Retained-particle outcome -> bit: 00 (or 0) is 0, 01/10 (or 1) is 1."""
    if len(outcome) == 1:
        return int(outcome[0])
    if sum(outcome) > 1:
        raise ProtocolIntegrityError(f"retained pair measured as {outcome}")
    return int(sum(outcome))


def step3_compute(party: PartyState, config: ProtocolConfig, rng: np.random.Generator) -> np.ndarray:
    """Z-measure retained pairs and received particles; ``C_i`` = pair bit XOR received bit."""
    res = config.resource
    party.pair_outcomes, c1 = [], []
    for reg in party.registers:
        rec = measure_z(reg.state, res.pair_qubits, rng)
        reg.state = rec.post_state
        party.pair_outcomes.append(rec.bitstring)
        c1.append(pair_bit(rec.outcomes))
    party.third_outcomes = [p.measure("Z", rng) for p in party.received]
    party.c1 = np.array(c1, dtype=np.uint8)
    party.c2 = np.array(party.third_outcomes, dtype=np.uint8)
    party.c = party.c1 ^ party.c2
    return party.c


def merge(c: np.ndarray, mix: np.ndarray, positions: Sequence[int]) -> np.ndarray:
    """Place ``mix`` at ``positions`` (ascending) and ``c`` in the remaining slots."""
    total = c.size + mix.size
    out = np.empty(total, dtype=np.uint8)
    mask = np.zeros(total, dtype=bool)
    mask[list(positions)] = True
    if mask.sum() != mix.size:
        raise ValueError("position count does not match mix length")
    out[mask] = mix
    out[~mask] = c
    return out


def unmerge(merged: np.ndarray, positions: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    mask = np.zeros(merged.size, dtype=bool)
    mask[list(positions)] = True
    return merged[~mask], merged[mask]


def _send_protected(transcript: Transcript, key: SharedKey | None, payload, sender: str,
                    receiver: str, label: str) -> ClassicalMessage:
    if key is None:
        msg = crypto.plaintext(sender, receiver, label, payload)
    else:
        msg = crypto.otp_encrypt(key, payload, sender, receiver, label)
    return transcript.send(msg)


def _receive(key: SharedKey | None, msg: ClassicalMessage) -> np.ndarray:
    return crypto.otp_decrypt(key, msg) if msg.encrypted else msg.payload


def step4_mix(alice: PartyState, bob: PartyState, keys: dict[str, SharedKey],
              config: ProtocolConfig, rng_a: np.random.Generator, rng_b: np.random.Generator,
              transcript: Transcript) -> tuple[ClassicalMessage, ClassicalMessage, list[int]]:
    """Exchange mix-up sequences and positions, merge, and ship ``C''`` to TP.

    Returns the two messages addressed to TP and Alice's position sequence.
    """
    n, l = config.n_bits, config.mix_length
    k_ab = keys.get("K_AB") if config.protects_mix else None

    alice.mix = rng_a.integers(0, 2, size=l, dtype=np.uint8)
    bob.mix = rng_b.integers(0, 2, size=l, dtype=np.uint8)
    m_a = _send_protected(transcript, k_ab, alice.mix, "Alice", "Bob", LBL_MIX_A)
    m_b = _send_protected(transcript, k_ab, bob.mix, "Bob", "Alice", LBL_MIX_B)
    bob.peer_mix = _receive(k_ab, m_a)
    alice.peer_mix = _receive(k_ab, m_b)

    alice.positions = sorted(int(p) for p in rng_a.choice(n + l, size=l, replace=False))
    m_sq = _send_protected(transcript, k_ab, crypto.encode_positions(alice.positions, n + l),
                           "Alice", "Bob", LBL_POSITIONS)
    bob.positions = crypto.decode_positions(_receive(k_ab, m_sq), n + l)

    alice.merged = merge(alice.c, alice.mix, alice.positions)
    bob.merged = merge(bob.c, bob.mix, bob.positions)
    to_tp_a = transcript.send(crypto.otp_encrypt(keys["K_AT"], alice.merged, "Alice", "TP", LBL_MERGED_A))
    to_tp_b = transcript.send(crypto.otp_encrypt(keys["K_BT"], bob.merged, "Bob", "TP", LBL_MERGED_B))
    return to_tp_a, to_tp_b, alice.positions


def step5_tp(merged_a: np.ndarray, merged_b: np.ndarray) -> int:
    """``R'`` = Hamming distance of the two merged sequences."""
    merged_a, merged_b = crypto.as_bits(merged_a), crypto.as_bits(merged_b)
    if merged_a.size != merged_b.size:
        raise ValueError(f"merged lengths differ: {merged_a.size} vs {merged_b.size}")
    return int(np.count_nonzero(merged_a ^ merged_b))


def step6_result(r_prime: int, mix_a: np.ndarray, mix_b: np.ndarray) -> tuple[int, str]:
    r = r_prime - int(np.count_nonzero(crypto.as_bits(mix_a) ^ crypto.as_bits(mix_b)))
    if r < 0:
        raise ProtocolIntegrityError(f"negative R ({r}) from R'={r_prime}")
    return r, EQUAL if r == 0 else NOT_EQUAL


# -- driver -------------------------------------------------------------------------

ChannelTransform = Callable[[list[Photon]], list[Photon]]


def _notes(config: ProtocolConfig) -> list[str]:
    notes = []
    if config.variant == "LWJ11":
        notes.append("LWJ11 replica checks the channel with decoy photons instead of W states")
    if config.encoding == "sigma_x" and config.resource.rotated:
        notes.append("sigma_x leaves |+>/|-> unflipped: bits encoded on rotated carriers are lost")
    return notes


def run_protocol(config: ProtocolConfig, x: int, y: int, adversary=None,
                 forced_kinds: tuple[Sequence[str], Sequence[str]] | None = None) -> ProtocolRun:
    """Execute one full comparison of ``x`` and ``y``.

    ``adversary`` may be any object with a ``channel_transform(direction, rng)``
    method returning a callable over the in-flight particle list (or None).
    ``forced_kinds`` pins Alice's and Bob's initial carrier kinds.
    """
    res = config.resource
    alice = PartyState("Alice", secret_to_bits(x, config.n_bits))
    bob = PartyState("Bob", secret_to_bits(y, config.n_bits))
    rng_keys, rng_a, rng_b, rng_eve = (np.random.default_rng(s)
                                       for s in np.random.SeedSequence(config.seed).spawn(4))
    transcript = Transcript()
    report = ComparisonReport(verdict=ABORTED, r=None, r_prime=None, notes=_notes(config))
    run = ProtocolRun(config, x, y, report, transcript, parties={"Alice": alice, "Bob": bob})

    keys = {}
    for name, size in required_key_bits(config).items():
        a, b = {"K_AB": ("Alice", "Bob"), "K_AT": ("Alice", "TP"), "K_BT": ("Bob", "TP")}[name]
        keys[name] = crypto.qkd_establish(a, b, size, rng_keys)
        transcript.event("qkd", key=name, parties=[a, b], length=size)

    # step 1
    kinds_a, kinds_b = forced_kinds if forced_kinds is not None else (None, None)
    out_a, book_a = step1_prepare(alice, config, rng_a, kinds_a)
    out_b, book_b = step1_prepare(bob, config, rng_b, kinds_b)
    flights = {"A->B": out_a, "B->A": out_b}
    for direction in DIRECTIONS:
        transform = adversary.channel_transform(direction, rng_eve) if adversary is not None else None
        if transform is not None:
            flights[direction] = transform(flights[direction])
        sender, receiver = ("Alice", "Bob") if direction == "A->B" else ("Bob", "Alice")
        transcript.transmit(sender, receiver, len(flights[direction]))

    # step 2: decoy checks in both directions, then announcements and H corrections
    checks = {}
    for direction, book, checker_rng in (("A->B", book_a, rng_b), ("B->A", book_b, rng_a)):
        sender, receiver = ("Alice", "Bob") if direction == "A->B" else ("Bob", "Alice")
        transcript.send(crypto.plaintext(sender, receiver, LBL_DECOY_REVEAL, book.reveal_bits()))
        rate, outcomes = check_decoys(flights[direction], book, checker_rng)
        transcript.send(crypto.plaintext(receiver, sender, LBL_DECOY_OUTCOMES, outcomes))
        transcript.event("eavesdrop-check", direction=direction, decoys=len(book.positions),
                         error_rate=rate, passed=rate <= config.error_threshold)
        checks[direction] = rate
    report.error_rates = dict(checks)
    if any(rate > config.error_threshold for rate in checks.values()):
        transcript.event("abort", reason="eavesdropping detected")
        return run

    for party, inbound, book, peer in ((bob, flights["A->B"], book_a, alice),
                                       (alice, flights["B->A"], book_b, bob)):
        flags = [1 if k in res.rotated else 0 for k in peer.kinds]
        msg = transcript.send(crypto.plaintext(peer.id, party.id, LBL_ANNOUNCE, flags))
        announced = [res.kinds[-1] if f else res.kinds[0] for f in msg.payload]
        party.received = strip_decoys(inbound, book)
        align_received(party.received, announced, res)

    # step 3
    step3_compute(alice, config, rng_a)
    step3_compute(bob, config, rng_b)

    # steps 4-5
    to_tp_a, to_tp_b, _ = step4_mix(alice, bob, keys, config, rng_a, rng_b, transcript)
    merged_a = crypto.otp_decrypt(keys["K_AT"], to_tp_a)
    merged_b = crypto.otp_decrypt(keys["K_BT"], to_tp_b)
    r_prime = step5_tp(merged_a, merged_b)
    run.tp_view = {"merged_a": merged_a, "merged_b": merged_b, "r_prime": r_prime}
    for party in ("Alice", "Bob"):
        transcript.send(crypto.plaintext("TP", party, LBL_R_PRIME,
                                         crypto.int_to_bits(r_prime, R_PRIME_BITS)))

    # step 6
    r_a, verdict_a = step6_result(crypto.bits_to_int(transcript.messages(LBL_R_PRIME)[0].payload),
                                  alice.mix, alice.peer_mix)
    r_b, verdict_b = step6_result(crypto.bits_to_int(transcript.messages(LBL_R_PRIME)[1].payload),
                                  bob.peer_mix, bob.mix)
    if (r_a, verdict_a) != (r_b, verdict_b):
        raise ProtocolIntegrityError(f"parties disagree: Alice R={r_a}, Bob R={r_b}")
    transcript.event("result", R=r_a, verdict=verdict_a)

    report.verdict, report.r, report.r_prime = verdict_a, r_a, r_prime
    report.per_bit = [
        BitRecord(i, int(alice.secret[i]), int(bob.secret[i]), alice.kinds[i], bob.kinds[i],
                  alice.pair_outcomes[i], str(alice.third_outcomes[i]),
                  bob.pair_outcomes[i], str(bob.third_outcomes[i]),
                  int(alice.c1[i]), int(alice.c2[i]), int(bob.c1[i]), int(bob.c2[i]),
                  int(alice.c[i]), int(bob.c[i]), int(alice.c[i] ^ bob.c[i]))
        for i in range(config.n_bits)
    ]
    return run
