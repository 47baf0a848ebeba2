"""Keyed data hiding in the pattern choices of a superpixel mirror array.

Every superpixel whose value group holds 2**d patterns can carry d bits by
the choice of which pattern represents the value, without touching the
modulated field at all.  The embedded stream is a 32-bit big-endian length
header followed by the payload bits shuffled by a keyed Fisher-Yates
permutation; superpixels are visited row-major and each consumes its d
stream bits MSB-first as an index into the group's pattern list.  Once the
stream runs out, the remaining superpixels fall back to a fill strategy.
"""

from __future__ import annotations

import re
import struct
from dataclasses import dataclass

import numpy as np

from .codebook import Codebook
from .rng import mul_high, permutation, stream_u64
from .superpixel import codes_to_mirrors, mirrors_to_codes

HEADER_BITS = 32
FILL_SEED_XOR = 0xA5A5A5A5A5A5A5A5
FILL_STRATEGIES = ("min", "max", "random")


class PayloadTooLargeError(ValueError):
    def __init__(self, requested_bits: int, capacity_bits: int):
        self.requested_bits = requested_bits
        self.capacity_bits = capacity_bits
        super().__init__(
            f"payload of {requested_bits} bits does not fit: plan capacity is "
            f"{capacity_bits} bits and {HEADER_BITS} are reserved for the header"
        )


class BadHeaderError(ValueError):
    pass


class InvalidEmbeddedPatternError(ValueError):
    pass


@dataclass(frozen=True)
class StegoKey:
    """64-bit key seeding the payload permutation."""

    seed: int

    def __post_init__(self):
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("key seed must fit in 64 bits")

    @classmethod
    def from_hex(cls, text: str) -> "StegoKey":
        # int(text, 16) would tolerate "0x" prefixes and signs; be strict
        if not re.fullmatch(r"[0-9a-fA-F]{16}", text):
            raise ValueError("key must be exactly 16 hex digits")
        return cls(int(text, 16))

    def to_hex(self) -> str:
        return f"{self.seed:016x}"


def bytes_to_bits(data: bytes) -> np.ndarray:
    """Unpack bytes to a 0/1 uint8 array, MSB of each byte first."""
    return np.unpackbits(np.frombuffer(data, dtype=np.uint8))


def bits_to_bytes(bits: np.ndarray) -> bytes:
    """Pack a 0/1 array back to bytes; a ragged tail is zero-padded."""
    return np.packbits(np.asarray(bits, dtype=np.uint8)).tobytes()


def permute_bits(bits: np.ndarray, key: StegoKey) -> np.ndarray:
    bits = np.asarray(bits, dtype=np.uint8)
    return bits[permutation(bits.size, key.seed)]


def inverse_permute_bits(bits: np.ndarray, key: StegoKey) -> np.ndarray:
    bits = np.asarray(bits, dtype=np.uint8)
    out = np.empty_like(bits)
    out[permutation(bits.size, key.seed)] = bits
    return out


def capacity_of_plan(plan: np.ndarray, codebook: Codebook) -> int:
    """Total hidden-bit capacity of a plan (header bits not deducted)."""
    return int(codebook.capacities[np.asarray(plan)].sum())


def _header(length: int) -> np.ndarray:
    return np.unpackbits(np.frombuffer(struct.pack(">I", length), dtype=np.uint8))


def _bit_offsets(caps: np.ndarray) -> np.ndarray:
    offs = np.zeros(caps.size, dtype=np.int64)
    np.cumsum(caps[:-1], out=offs[1:])
    return offs


def embed(plan: np.ndarray, payload_bits: np.ndarray, key: StegoKey,
          codebook: Codebook, fill: str = "min") -> np.ndarray:
    """Choose one pattern per superpixel so the mirror array carries the payload.

    Returns the (4H, 4W) mirror array.  The represented value of every
    superpixel is untouched: only the pattern choice inside each group
    encodes data, so decoding the modulation is unaffected.
    """
    if fill not in FILL_STRATEGIES:
        raise ValueError(f"fill must be one of {FILL_STRATEGIES}")
    plan = np.asarray(plan)
    payload_bits = np.asarray(payload_bits, dtype=np.uint8)
    caps = codebook.capacities[plan].ravel()
    total = int(caps.sum())
    if HEADER_BITS + payload_bits.size > total:
        raise PayloadTooLargeError(payload_bits.size, total)

    stream = np.concatenate([_header(payload_bits.size), permute_bits(payload_bits, key)])
    offs = _bit_offsets(caps)
    active = offs < stream.size

    groups = plan.ravel().astype(np.int64)
    starts = codebook.group_starts[groups]
    sizes = codebook.group_sizes[groups]

    pick = np.zeros(groups.size, dtype=np.int64)
    # A superpixel straddling the end of the stream takes what is left,
    # zero-padded on the low side of its index.
    padded = np.concatenate([stream, np.zeros(8, dtype=np.uint8)])
    for d in range(1, 9):
        sel = active & (caps == d)
        if not sel.any():
            continue
        window = padded[offs[sel, None] + np.arange(d)]
        pick[sel] = window.astype(np.int64) @ (1 << np.arange(d - 1, -1, -1, dtype=np.int64))

    rest = ~active
    if rest.any():
        if fill == "min":
            pass                                        # pick stays 0
        elif fill == "max":
            pick[rest] = sizes[rest] - 1
        else:
            draws = stream_u64(key.seed ^ FILL_SEED_XOR, int(rest.sum()))
            pick[rest] = mul_high(draws, sizes[rest].astype(np.uint64)).astype(np.int64)

    codes = codebook.patterns_sorted[starts + pick].reshape(plan.shape)
    return codes_to_mirrors(codes)


def extract(mirrors: np.ndarray, key: StegoKey, codebook: Codebook) -> np.ndarray:
    """Recover the payload bits hidden in a mirror array."""
    codes = mirrors_to_codes(mirrors).ravel().astype(np.int64)
    groups = codebook.group_of_pattern[codes]
    pos = codebook.position_of_pattern[codes]
    caps = codebook.capacities[groups]
    if np.any(pos >= np.int64(1) << caps):
        raise InvalidEmbeddedPatternError("pattern position exceeds its group capacity")

    total = int(caps.sum())
    if total < HEADER_BITS:
        raise BadHeaderError(f"stream holds {total} bits, shorter than the {HEADER_BITS}-bit header")
    bits = np.zeros(total, dtype=np.uint8)
    offs = _bit_offsets(caps)
    for d in range(1, 9):
        sel = caps == d
        if not sel.any():
            continue
        shifts = np.arange(d - 1, -1, -1, dtype=np.int64)
        bits[offs[sel, None] + np.arange(d)] = (pos[sel, None] >> shifts) & 1

    length = int(bits[:HEADER_BITS] @ (np.int64(1) << np.arange(HEADER_BITS - 1, -1, -1, dtype=np.int64)))
    if length > total - HEADER_BITS:
        raise BadHeaderError(
            f"header declares {length} payload bits but only {total - HEADER_BITS} were embedded"
        )
    return inverse_permute_bits(bits[HEADER_BITS:HEADER_BITS + length], key)
