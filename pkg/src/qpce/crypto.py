"""Trusted-oracle key establishment, one-time pad and classical message framing."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

POSITION_COUNT_BITS = 16


class KeyExhaustedError(RuntimeError):
    """A one-time pad ran out of fresh key bits."""


def as_bits(bits) -> np.ndarray:
    arr = np.asarray(bits, dtype=np.uint8).reshape(-1)
    if arr.size and arr.max() > 1:
        raise ValueError("bit sequence may only contain 0 and 1")
    return arr


def bits_to_hex(bits) -> str:
    bits = as_bits(bits)
    return np.packbits(bits).tobytes().hex() if bits.size else ""


def hex_to_bits(payload_hex: str, length: int) -> np.ndarray:
    raw = np.frombuffer(bytes.fromhex(payload_hex), dtype=np.uint8)
    return np.unpackbits(raw)[:length].astype(np.uint8)


def int_to_bits(value: int, width: int) -> np.ndarray:
    """Big-endian fixed-width binary."""
    if value < 0 or value >> width:
        raise ValueError(f"{value} does not fit in {width} bits")
    return np.array([(value >> (width - 1 - k)) & 1 for k in range(width)], dtype=np.uint8)


def bits_to_int(bits) -> int:
    out = 0
    for b in as_bits(bits):
        out = (out << 1) | int(b)
    return out


@dataclass
class SharedKey:
    """Key material held by both ends of a pair.

    ``cursor`` only moves forward; each encryption consumes fresh bits and the
    message records where its segment starts so the peer decrypts against the
    same region.
    """

    pair: tuple[str, str]
    bits: np.ndarray
    cursor: int = 0

    @property
    def remaining(self) -> int:
        return self.bits.size - self.cursor

    def consume(self, count: int) -> tuple[int, np.ndarray]:
        if count > self.remaining:
            raise KeyExhaustedError(
                f"key {self.pair[0]}-{self.pair[1]} needs {count} bits, {self.remaining} left")
        offset = self.cursor
        self.cursor += count
        return offset, self.bits[offset:self.cursor]

    def segment(self, offset: int, count: int) -> np.ndarray:
        if offset < 0 or offset + count > self.cursor:
            raise KeyExhaustedError(f"segment [{offset}, {offset + count}) was never issued")
        return self.bits[offset:offset + count]


def qkd_establish(a: str, b: str, length: int, rng: np.random.Generator) -> SharedKey:
    """Issue ``length`` uniformly random bits shared by ``a`` and ``b`` only."""
    if length <= 0:
        raise ValueError(f"key length must be positive, got {length}")
    bits = rng.integers(0, 2, size=length, dtype=np.uint8)
    bits.setflags(write=False)
    return SharedKey((a, b), bits)


@dataclass
class ClassicalMessage:
    sender: str
    receiver: str
    label: str
    payload: np.ndarray
    encrypted: bool = False
    key_offset: int | None = None
    seq: int = -1

    def to_dict(self) -> dict:
        return {
            "seq": self.seq,
            "sender": self.sender,
            "receiver": self.receiver,
            "label": self.label,
            "encrypted": self.encrypted,
            "length": int(self.payload.size),
            "payload_hex": bits_to_hex(self.payload),
            "key_offset": self.key_offset,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ClassicalMessage":
        return cls(data["sender"], data["receiver"], data["label"],
                   hex_to_bits(data["payload_hex"], data["length"]),
                   data["encrypted"], data["key_offset"], data["seq"])


def plaintext(sender: str, receiver: str, label: str, payload) -> ClassicalMessage:
    return ClassicalMessage(sender, receiver, label, as_bits(payload).copy())


def otp_encrypt(key: SharedKey, payload, sender: str, receiver: str, label: str) -> ClassicalMessage:
    payload = as_bits(payload)
    offset, pad = key.consume(payload.size)
    return ClassicalMessage(sender, receiver, label, payload ^ pad, True, offset)


def otp_decrypt(key: SharedKey, message: ClassicalMessage) -> np.ndarray:
    if not message.encrypted or message.key_offset is None:
        raise ValueError(f"message {message.label!r} is not encrypted")
    return message.payload ^ key.segment(message.key_offset, message.payload.size)


def position_width(domain_size: int) -> int:
    return math.ceil(math.log2(domain_size)) if domain_size > 1 else 0


def encode_positions(positions: Sequence[int], domain_size: int) -> np.ndarray:
    """16-bit count followed by each position in ``ceil(log2(domain_size))`` bits."""
    positions = [int(p) for p in positions]
    if len(positions) >> POSITION_COUNT_BITS:
        raise ValueError(f"too many positions ({len(positions)})")
    if any(p < 0 or p >= domain_size for p in positions):
        raise ValueError(f"position outside [0, {domain_size})")
    if any(b <= a for a, b in zip(positions, positions[1:])):
        raise ValueError("positions must be strictly increasing")
    width = position_width(domain_size)
    parts = [int_to_bits(len(positions), POSITION_COUNT_BITS)]
    parts += [int_to_bits(p, width) for p in positions]
    return np.concatenate(parts)


def decode_positions(bits, domain_size: int) -> list[int]:
    bits = as_bits(bits)
    if bits.size < POSITION_COUNT_BITS:
        raise ValueError("position encoding shorter than its count header")
    count = bits_to_int(bits[:POSITION_COUNT_BITS])
    width = position_width(domain_size)
    if bits.size != POSITION_COUNT_BITS + count * width:
        raise ValueError(f"header says {count} positions but body has {bits.size - POSITION_COUNT_BITS} bits")
    body = bits[POSITION_COUNT_BITS:]
    positions = [bits_to_int(body[k * width:(k + 1) * width]) for k in range(count)]
    if any(p >= domain_size for p in positions):
        raise ValueError(f"decoded position outside [0, {domain_size})")
    if any(b <= a for a, b in zip(positions, positions[1:])):
        raise ValueError("decoded positions are not strictly increasing")
    return positions
