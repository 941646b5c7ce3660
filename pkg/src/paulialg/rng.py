"""Seeded random instances via SplitMix64.

SplitMix64 is fixed as the instance generator so workloads reproduce
across runs and across language implementations from the seed alone.
Draw order per string: one 64-bit draw per qubit in ascending qubit
order (low two bits select the letter, 0=I 1=X 2=Y 3=Z), then for sums
one draw per term for the coefficient, uniform in [-1, 1) via the top
53 bits. Term t consumes draws t*(n+1) .. t*(n+1)+n.
"""

from __future__ import annotations

import numpy as np

from .bits import words_for
from .strings import PauliString
from .sums import PauliSum

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


class SplitMix64:
    """Counter-based 64-bit generator; one instance per workload stream."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = int(seed) & _MASK64

    def next_array(self, count: int) -> np.ndarray:
        steps = np.arange(1, count + 1, dtype=np.uint64) * np.uint64(_GOLDEN)
        out = _mix(np.uint64(self._state) + steps)
        self._state = (self._state + count * _GOLDEN) & _MASK64
        return out

    def next_uint64(self) -> int:
        return int(self.next_array(1)[0])


def _uniform_pm1(u: np.ndarray) -> np.ndarray:
    """Map uint64 draws to doubles uniform in [-1, 1)."""
    return (u >> np.uint64(11)).astype(np.float64) * (2.0 ** -52) - 1.0


def _letters_to_words(letters: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Pack (m, n) letter codes (0=I 1=X 2=Y 3=Z) into word matrices."""
    m = letters.shape[0]
    words = words_for(n)
    x_bits = ((letters == 1) | (letters == 2)).astype(np.uint8)
    z_bits = (letters >= 2).astype(np.uint8)
    pad = np.zeros((m, words * 64), dtype=np.uint8)
    pad[:, :n] = x_bits
    x = np.packbits(pad, axis=1, bitorder="little").view("<u8").astype(np.uint64)
    pad[:, :n] = z_bits
    z = np.packbits(pad, axis=1, bitorder="little").view("<u8").astype(np.uint64)
    return x, z


def random_string(n: int, stream: SplitMix64) -> PauliString:
    """Uniform letters per qubit, phase 0; advances the stream by n draws."""
    letters = (stream.next_array(n) & np.uint64(3)).astype(np.uint8).reshape(1, n)
    x, z = _letters_to_words(letters, n)
    return PauliString(n, x[0], z[0], 0, validate=False)


def random_sum(n: int, m: int, seed: int) -> PauliSum:
    """M uniform random terms with real coefficients uniform in [-1, 1)."""
    if m == 0:
        return PauliSum.from_terms([], n)
    stream = SplitMix64(seed)
    draws = stream.next_array(m * (n + 1)).reshape(m, n + 1)
    letters = (draws[:, :n] & np.uint64(3)).astype(np.uint8)
    coeffs = _uniform_pm1(draws[:, n]).astype(np.complex128)
    x, z = _letters_to_words(letters, n)
    return PauliSum._from_columns(n, x, z, np.zeros(m, dtype=np.uint8), coeffs)
