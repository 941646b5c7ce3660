"""Bit-packed Pauli strings with exact 2-bit phase tracking.

A string is i^k * (tensor product of per-qubit letters), with letters
encoded per qubit as an (x, z) bit pair: I=(0,0), X=(1,0), Z=(0,1),
Y=(1,1). Y carries no extra phase in the flags. The phase exponent k is
an integer mod 4 (factor i^k), stored as sign/imaginary bits k = 2s + m.

Values are immutable; every operation returns a new string.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from . import gates
from .bits import (
    DimensionError,
    PHASE_FACTORS,
    check_padding,
    format_label,
    parse_label,
    popcount,
    tier_for,
    words_for,
)

GATE_NAMES = ("H", "S", "CNOT", "CZ")


def _phase_exponent_words(ax, az, bx, bz) -> np.ndarray:
    """Letter-product phase of a*b as i^k, from the packed words alone.

    Per qubit the exponent is x1*z1 + x2*z2 + 2*z1*x2 - (x1^x2)(z1^z2)
    mod 4 (derived from Y = iXZ and X^x Z^z reordering); summing over
    qubits turns each term into a popcount. Word arrays may carry leading
    batch dimensions; the last axis is the word index.
    """
    k = popcount(ax & az).sum(axis=-1, dtype=np.int64)
    k = k + popcount(bx & bz).sum(axis=-1, dtype=np.int64)
    k = k + 2 * popcount(az & bx).sum(axis=-1, dtype=np.int64)
    k = k - popcount((ax ^ bx) & (az ^ bz)).sum(axis=-1, dtype=np.int64)
    return k % 4


def _sip_words(ax, az, bx, bz) -> np.ndarray:
    """Symplectic inner product parity: popcount(ax&bz) + popcount(az&bx) mod 2."""
    acc = popcount(ax & bz).sum(axis=-1, dtype=np.int64)
    acc = acc + popcount(az & bx).sum(axis=-1, dtype=np.int64)
    return acc & 1


class PauliString:
    """Fixed-capacity n-qubit Pauli operator with a global phase i^k.

    The x/z bit-vectors are stored as uint64 word arrays sized by the
    smallest capacity tier (64/128/256/512/1024) holding n qubits; all
    bits at positions >= n are zero.
    """

    __slots__ = ("n", "tier", "x", "z", "phase")

    def __init__(
        self,
        n: int,
        x_words: np.ndarray,
        z_words: np.ndarray,
        phase: int = 0,
        *,
        validate: bool = True,
    ):
        self.n = int(n)
        self.tier = tier_for(self.n)
        x = np.ascontiguousarray(x_words, dtype=np.uint64)
        z = np.ascontiguousarray(z_words, dtype=np.uint64)
        if validate:
            words = self.tier // 64
            if x.shape != (words,) or z.shape != (words,):
                raise ValueError(
                    f"expected {words} words per vector for {self.n} qubits, "
                    f"got shapes {x.shape} and {z.shape}"
                )
            if not check_padding(x, z, self.n):
                raise ValueError("nonzero padding bits at positions >= n")
            if x_words is x.base or x is x_words:
                x = x.copy()
            if z_words is z.base or z is z_words:
                z = z.copy()
        x.flags.writeable = False
        z.flags.writeable = False
        self.x = x
        self.z = z
        self.phase = int(phase) % 4

    @classmethod
    def from_label(cls, label: str, phase: int = 0) -> "PauliString":
        """Build from an I/X/Y/Z text label; leftmost character is qubit 0."""
        x, z, n = parse_label(label)
        return cls(n, x, z, phase, validate=False)

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        words = words_for(n)
        return cls(n, np.zeros(words, np.uint64), np.zeros(words, np.uint64), 0, validate=False)

    def to_label(self) -> tuple[str, int]:
        """Inverse of from_label: (letters, phase exponent)."""
        return format_label(self.x, self.z, self.n), self.phase

    @property
    def label(self) -> str:
        return format_label(self.x, self.z, self.n)

    @property
    def phase_factor(self) -> complex:
        """The global phase i^k as a complex scalar."""
        return complex(PHASE_FACTORS[self.phase])

    @property
    def words(self) -> int:
        return self.tier // 64

    def _check_same_n(self, other: "PauliString") -> None:
        if self.n != other.n:
            raise DimensionError(f"qubit counts differ: {self.n} != {other.n}")

    def product_phase_exponent(self, other: "PauliString") -> int:
        """Phase exponent k of the letter product, excluding both flags."""
        self._check_same_n(other)
        return int(_phase_exponent_words(self.x, self.z, other.x, other.z))

    def multiply(self, other: "PauliString") -> "PauliString":
        """Exact product: letters XOR, phase k_a + k_b + letter-product phase."""
        self._check_same_n(other)
        k = self.phase + other.phase + self.product_phase_exponent(other)
        return PauliString(self.n, self.x ^ other.x, self.z ^ other.z, k, validate=False)

    __mul__ = multiply

    def symplectic_inner_product(self, other: "PauliString") -> int:
        """Parity bit: 0 when the strings commute, 1 when they anti-commute."""
        self._check_same_n(other)
        return int(_sip_words(self.x, self.z, other.x, other.z))

    def commutes(self, other: "PauliString") -> bool:
        return self.symplectic_inner_product(other) == 0

    def weight(self) -> int:
        """Number of qubits carrying a non-identity letter."""
        return int(popcount(self.x | self.z).sum())

    def apply_clifford(self, gate: str, qubits: int | Sequence[int]) -> "PauliString":
        """Conjugate by a Clifford gate: returns U * self * U^dagger."""
        if isinstance(qubits, (int, np.integer)):
            qubits = (int(qubits),)
        else:
            qubits = tuple(int(q) for q in qubits)
        x = self.x.copy().reshape(1, -1)
        z = self.z.copy().reshape(1, -1)
        flags = np.array([self.phase], dtype=np.uint8)
        gates.apply_clifford_inplace(x, z, flags, gate, qubits, self.n)
        return PauliString(self.n, x[0], z[0], int(flags[0]), validate=False)

    def canonical_key(self) -> bytes:
        """Fixed-width sort key over (z, x) words, ignoring the phase."""
        return self.z.astype(">u8").tobytes() + self.x.astype(">u8").tobytes()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliString):
            return NotImplemented
        return (
            self.n == other.n
            and self.phase == other.phase
            and bool(np.array_equal(self.x, other.x))
            and bool(np.array_equal(self.z, other.z))
        )

    def __hash__(self) -> int:
        return hash((self.n, self.phase, self.x.tobytes(), self.z.tobytes()))

    def __repr__(self) -> str:
        prefix = ("", "i*", "-", "-i*")[self.phase]
        return f"PauliString({prefix}{self.label})"


def ps_from_label(label: str, phase: int = 0) -> PauliString:
    return PauliString.from_label(label, phase)


def ps_to_label(p: PauliString) -> tuple[str, int]:
    return p.to_label()


def product_phase_exponent(a: PauliString, b: PauliString) -> int:
    return a.product_phase_exponent(b)


def ps_multiply(a: PauliString, b: PauliString) -> PauliString:
    return a.multiply(b)


def symplectic_inner_product(a: PauliString, b: PauliString) -> int:
    return a.symplectic_inner_product(b)


def ps_commutes(a: PauliString, b: PauliString) -> bool:
    return a.commutes(b)


def ps_weight(p: PauliString) -> int:
    return p.weight()


def ps_apply_clifford(p: PauliString, gate: str, qubits: int | Iterable[int]) -> PauliString:
    return p.apply_clifford(gate, qubits)
