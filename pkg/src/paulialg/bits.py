"""Word-level helpers: capacity tiers, popcount, label/word packing.

Qubit q lives at bit (q mod 64) of word q // 64; qubit 0 is the leftmost
label character. Strings are allocated at a fixed capacity tier, so the
word count depends on the tier, not on ceil(n/64).
"""

from __future__ import annotations

import numpy as np

CAPACITY_TIERS = (64, 128, 256, 512, 1024)
MAX_QUBITS = CAPACITY_TIERS[-1]

# letters indexed by x + 2z: (0,0)->I, (1,0)->X, (0,1)->Z, (1,1)->Y
LETTERS_BY_CODE = np.frombuffer(b"IXZY", dtype=np.uint8)

# i^k for k in 0..3
PHASE_FACTORS = np.array([1.0, 1.0j, -1.0, -1.0j], dtype=np.complex128)


class CapacityError(ValueError):
    """Qubit count exceeds the largest capacity tier."""


class LabelError(ValueError):
    """Malformed Pauli label."""


class DimensionError(ValueError):
    """Operands have mismatched qubit counts."""


def tier_for(n: int) -> int:
    """Smallest capacity tier that can hold n qubits."""
    if n <= 0:
        raise ValueError(f"qubit count must be positive, got {n}")
    for tier in CAPACITY_TIERS:
        if n <= tier:
            return tier
    raise CapacityError(f"{n} qubits exceeds the largest capacity tier ({MAX_QUBITS})")


def words_for(n: int) -> int:
    """Number of 64-bit words per bit-vector at the tier holding n qubits."""
    return tier_for(n) // 64


def popcount(a: np.ndarray) -> np.ndarray:
    """Per-element population count of a uint64 array."""
    return np.bitwise_count(a)


def pack_bits(bits: np.ndarray, words: int) -> np.ndarray:
    """Pack a 0/1 array of length n into `words` little-endian 64-bit words."""
    padded = np.zeros(words * 64, dtype=np.uint8)
    padded[: bits.size] = bits
    return np.packbits(padded, bitorder="little").view("<u8").astype(np.uint64)

def unpack_bits(w: np.ndarray, n: int) -> np.ndarray:
    """Inverse of pack_bits: first n bits of the word array as a 0/1 array."""
    raw = np.frombuffer(w.astype("<u8").tobytes(), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n]


def parse_label(label: str, n_max: int = MAX_QUBITS) -> tuple[np.ndarray, np.ndarray, int]:
    """Parse an I/X/Y/Z label into (x_words, z_words, n).

    Raises LabelError naming the position of the first bad character and
    CapacityError when the label is longer than the largest tier.
    """
    n = len(label)
    if n == 0:
        raise LabelError("empty Pauli label")
    if n > n_max:
        raise CapacityError(f"label length {n} exceeds capacity {n_max}")
    chars = np.frombuffer(label.encode("ascii", errors="replace"), dtype=np.uint8)
    x_bits = (chars == ord("X")) | (chars == ord("Y"))
    z_bits = (chars == ord("Z")) | (chars == ord("Y"))
    valid = x_bits | z_bits | (chars == ord("I"))
    if not valid.all():
        pos = int(np.argmin(valid))
        raise LabelError(f"invalid character {label[pos]!r} at position {pos}")
    words = words_for(n)
    return (
        pack_bits(x_bits.astype(np.uint8), words),
        pack_bits(z_bits.astype(np.uint8), words),
        n,
    )


def format_label(x_words: np.ndarray, z_words: np.ndarray, n: int) -> str:
    """Render (x, z) word arrays as an I/X/Y/Z label of length n."""
    codes = unpack_bits(x_words, n) + 2 * unpack_bits(z_words, n)
    return LETTERS_BY_CODE[codes].tobytes().decode("ascii")


def padding_mask(n: int, words: int) -> np.ndarray:
    """Word array with ones at every bit position < n (the valid region)."""
    mask = np.zeros(words, dtype=np.uint64)
    full, rem = divmod(n, 64)
    mask[:full] = np.uint64(0xFFFFFFFFFFFFFFFF)
    if rem:
        mask[full] = np.uint64((1 << rem) - 1)
    return mask


def check_padding(x_words: np.ndarray, z_words: np.ndarray, n: int) -> bool:
    """True when all bits at positions >= n are zero in both vectors."""
    mask = ~padding_mask(n, x_words.shape[-1])
    return not (np.any(x_words & mask) or np.any(z_words & mask))
