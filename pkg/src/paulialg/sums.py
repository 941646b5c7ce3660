"""Weighted Pauli sums in array-of-structures and struct-of-arrays layouts.

PauliSum stores each term as one packed record (x-words, z-words, flags
byte, complex coefficient); PauliSumSoA transposes that into per-word
contiguous arrays. Both layouts share the same kernels and stay
bijective under to_soa/to_aos.

Canonical form (after sort_and_combine): terms strictly sorted by the
(z-words, x-words) key, duplicate keys merged, phases folded into the
coefficients, magnitudes <= eps dropped.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

from . import gates
from .bits import DimensionError, PHASE_FACTORS, tier_for
from .rotations import RotationSpec, trig_values
from .strings import PauliString, _phase_exponent_words, _sip_words

# cap on broadcast temporaries in the outer product (output terms per chunk)
_MULTIPLY_CHUNK = 1 << 16


@dataclass(frozen=True)
class PauliTerm:
    """One (coefficient, string) entry of a sum."""

    coeff: complex
    string: PauliString

    def __post_init__(self):
        c = complex(self.coeff)
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise ValueError(f"coefficient must be finite, got {c}")
        object.__setattr__(self, "coeff", c)


TermEntry = Union[PauliTerm, tuple]


def aos_dtype(words: int) -> np.dtype:
    """Packed record layout: x-words, z-words, flags byte, coefficient."""
    return np.dtype(
        [
            ("x", np.uint64, (words,)),
            ("z", np.uint64, (words,)),
            ("flags", np.uint8),
            ("coeff", np.complex128),
        ]
    )


def _entries_to_columns(entries: Sequence[TermEntry], n: int | None):
    """Normalize (coeff, label-or-string) entries into column arrays."""
    coeffs = []
    strings = []
    for entry in entries:
        if isinstance(entry, PauliTerm):
            c, s = entry.coeff, entry.string
        else:
            c, s = entry
        if not isinstance(s, PauliString):
            s = PauliString.from_label(str(s))
        c = complex(c)
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise ValueError(f"coefficient must be finite, got {c}")
        if n is None:
            n = s.n
        elif s.n != n:
            raise DimensionError(f"term on {s.n} qubits in a {n}-qubit sum")
        coeffs.append(c)
        strings.append(s)
    if n is None:
        raise ValueError("qubit count required for an empty sum")
    words = tier_for(n) // 64
    m = len(strings)
    x = np.zeros((m, words), dtype=np.uint64)
    z = np.zeros((m, words), dtype=np.uint64)
    flags = np.zeros(m, dtype=np.uint8)
    for i, s in enumerate(strings):
        x[i] = s.x
        z[i] = s.z
        flags[i] = s.phase
    return n, x, z, flags, np.array(coeffs, dtype=np.complex128)


def _combine_columns(x, z, flags, coeffs, eps):
    """Sort by (z, x) key, merge duplicate keys, drop |coeff| <= eps.

    Index-array sort plus a single linear merge over adjacent runs; the
    i^k flags fold into the coefficients, so merged terms carry flags 0.
    """
    m, words = x.shape
    folded = coeffs * PHASE_FACTORS[flags]
    if m == 0:
        return x.copy(), z.copy(), flags.copy(), folded
    keys = [x[:, w] for w in range(words - 1, -1, -1)]
    keys += [z[:, w] for w in range(words - 1, -1, -1)]
    order = np.lexsort(tuple(keys))
    xs = x[order]
    zs = z[order]
    cs = folded[order]
    differs = np.any(xs[1:] != xs[:-1], axis=1) | np.any(zs[1:] != zs[:-1], axis=1)
    starts = np.flatnonzero(np.concatenate(([True], differs)))
    sums = np.add.reduceat(cs, starts)
    keep = np.abs(sums) > eps
    starts = starts[keep]
    return (
        np.ascontiguousarray(xs[starts]),
        np.ascontiguousarray(zs[starts]),
        np.zeros(starts.size, dtype=np.uint8),
        sums[keep],
    )


def _multiply_block(ax, az, base_a, acoeffs, bx, bz, base_b, bcoeffs, out, j0, j1):
    """Fill output rows [j0*Ma, j1*Ma) with a_i * b_j, j-major blocks."""
    out_x, out_z, out_flags, out_coeffs = out
    ma = ax.shape[0]
    step = max(1, _MULTIPLY_CHUNK // max(ma, 1))
    for js in range(j0, j1, step):
        je = min(js + step, j1)
        bxs = bx[js:je, None, :]
        bzs = bz[js:je, None, :]
        xr = ax[None, :, :] ^ bxs
        zr = az[None, :, :] ^ bzs
        cross = 2 * np.bitwise_count(az[None, :, :] & bxs).sum(axis=-1, dtype=np.int64)
        mixed = np.bitwise_count(xr & zr).sum(axis=-1, dtype=np.int64)
        k = (base_a[None, :] + base_b[js:je, None] + cross - mixed) % 4
        lo, hi = js * ma, je * ma
        out_x[lo:hi] = xr.reshape(-1, ax.shape[1])
        out_z[lo:hi] = zr.reshape(-1, ax.shape[1])
        out_flags[lo:hi] = k.reshape(-1).astype(np.uint8)
        out_coeffs[lo:hi] = (acoeffs[None, :] * bcoeffs[js:je, None]).reshape(-1)


def _multiply_columns(ax, az, aflags, acoeffs, bx, bz, bflags, bcoeffs, threads):
    """Outer product as columns; exactly len(a)*len(b) rows, block per b-term."""
    ma, words = ax.shape
    mb = bx.shape[0]
    total = ma * mb
    out = (
        np.empty((total, words), dtype=np.uint64),
        np.empty((total, words), dtype=np.uint64),
        np.empty(total, dtype=np.uint8),
        np.empty(total, dtype=np.complex128),
    )
    # per-operand phase contribution is independent of the partner term
    base_a = aflags.astype(np.int64) + np.bitwise_count(ax & az).sum(axis=-1, dtype=np.int64)
    base_b = bflags.astype(np.int64) + np.bitwise_count(bx & bz).sum(axis=-1, dtype=np.int64)
    if threads <= 1 or mb < 2:
        _multiply_block(ax, az, base_a, acoeffs, bx, bz, base_b, bcoeffs, out, 0, mb)
        return out
    bounds = np.linspace(0, mb, threads + 1, dtype=int)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [
            pool.submit(
                _multiply_block,
                ax, az, base_a, acoeffs, bx, bz, base_b, bcoeffs, out,
                int(bounds[i]), int(bounds[i + 1]),
            )
            for i in range(threads)
            if bounds[i] < bounds[i + 1]
        ]
        for f in futures:
            f.result()
    return out


def _rotation_columns(x, z, flags, coeffs, rot: RotationSpec):
    """Split terms under conjugation by exp(-i*theta/2 * P), un-combined.

    Terms commuting with P pass through; an anti-commuting term Q of
    coefficient c becomes (c*cos(theta), Q) and, when sin(theta) != 0,
    (c*(-i)*sin(theta)*i^k, letters of P*Q) with the product phase k
    folded into the coefficient.
    """
    gen = rot.generator
    cos_t, sin_t = trig_values(rot.theta)
    anti = _sip_words(x, z, gen.x, gen.z).astype(bool)
    m, words = x.shape

    if sin_t == 0.0:
        new_coeffs = np.where(anti, coeffs * cos_t, coeffs)
        return x.copy(), z.copy(), flags.copy(), new_coeffs

    prod_k = (flags[anti] + _phase_exponent_words(gen.x, gen.z, x[anti], z[anti])) % 4
    prod_coeffs = coeffs[anti] * (-1j * sin_t) * PHASE_FACTORS[prod_k]

    if cos_t == 0.0:
        out_x = x.copy()
        out_z = z.copy()
        out_flags = flags.copy()
        out_coeffs = coeffs.copy()
        out_x[anti] ^= gen.x
        out_z[anti] ^= gen.z
        out_flags[anti] = 0
        out_coeffs[anti] = prod_coeffs
        return out_x, out_z, out_flags, out_coeffs

    total = m + int(anti.sum())
    first = np.cumsum(np.concatenate(([0], 1 + anti.astype(np.int64))))[:m]
    second = first[anti] + 1
    out_x = np.empty((total, words), dtype=np.uint64)
    out_z = np.empty((total, words), dtype=np.uint64)
    out_flags = np.empty(total, dtype=np.uint8)
    out_coeffs = np.empty(total, dtype=np.complex128)
    out_x[first] = x
    out_z[first] = z
    out_flags[first] = flags
    out_coeffs[first] = np.where(anti, coeffs * cos_t, coeffs)
    out_x[second] = x[anti] ^ gen.x
    out_z[second] = z[anti] ^ gen.z
    out_flags[second] = 0
    out_coeffs[second] = prod_coeffs
    return out_x, out_z, out_flags, out_coeffs


def _check_finite(coeffs: np.ndarray) -> None:
    if coeffs.size and not np.isfinite(coeffs).all():
        raise ValueError("coefficients must be finite")


class _SumBase:
    """API shared by both layouts; subclasses adapt storage <-> columns."""

    __slots__ = ()

    n: int
    tier: int

    # --- layout adapters supplied by subclasses -------------------------
    def _columns(self):
        """(x (M,words), z, flags, coeffs) views or copies, column-major terms."""
        raise NotImplementedError

    @classmethod
    def _from_columns(cls, n, x, z, flags, coeffs):
        raise NotImplementedError

    def _gate_views(self):
        """Writable (x, z, flags) views for in-place gate application."""
        raise NotImplementedError

    # --- shared surface --------------------------------------------------
    @classmethod
    def from_terms(cls, entries: Iterable[TermEntry], n: int | None = None):
        """Build from (coeff, label) pairs or PauliTerm values, input order."""
        n, x, z, flags, coeffs = _entries_to_columns(list(entries), n)
        return cls._from_columns(n, x, z, flags, coeffs)

    @property
    def words(self) -> int:
        return self.tier // 64

    def __len__(self) -> int:
        return self._columns()[0].shape[0]

    def term(self, i: int) -> PauliTerm:
        x, z, flags, coeffs = self._columns()
        s = PauliString(self.n, x[i].copy(), z[i].copy(), int(flags[i]), validate=False)
        return PauliTerm(complex(coeffs[i]), s)

    def __iter__(self) -> Iterator[PauliTerm]:
        return (self.term(i) for i in range(len(self)))

    def labels(self) -> list[str]:
        return [t.string.label for t in self]

    def canonical_key(self, i: int) -> bytes:
        """Fixed-width (z-words, x-words) big-endian key of term i."""
        x, z, _, _ = self._columns()
        return z[i].astype(">u8").tobytes() + x[i].astype(">u8").tobytes()

    def _check_same_n(self, other) -> None:
        if self.n != other.n:
            raise DimensionError(f"qubit counts differ: {self.n} != {other.n}")

    def sort_and_combine(self, eps: float = 0.0):
        """Canonical form: key-sorted, duplicates merged, |coeff| <= eps dropped."""
        if eps < 0:
            raise ValueError("eps must be >= 0")
        x, z, flags, coeffs = self._columns()
        return type(self)._from_columns(self.n, *_combine_columns(x, z, flags, coeffs, eps))

    def multiply(self, other, *, threads: int = 1, eps: float = 0.0, combine: bool = True):
        """Outer product of two sums; canonical unless combine=False.

        The raw product has exactly len(self)*len(other) terms laid out
        as one contiguous block per right-hand term, so worker threads
        write disjoint regions and the result is identical for every
        thread count.
        """
        self._check_same_n(other)
        cols = _multiply_columns(*self._columns(), *other._columns(), int(threads))
        if combine:
            cols = _combine_columns(*cols, eps)
        return type(self)._from_columns(self.n, *cols)

    __mul__ = multiply

    def apply_clifford(self, gate: str, qubits: int | Sequence[int]) -> None:
        """Conjugate every term in place; term count is unchanged."""
        if isinstance(qubits, (int, np.integer)):
            qubits = (int(qubits),)
        else:
            qubits = tuple(int(q) for q in qubits)
        x, z, flags = self._gate_views()
        gates.apply_clifford_inplace(x, z, flags, gate, qubits, self.n)

    def apply_rotation(self, rot: RotationSpec, *, eps: float = 0.0, combine: bool = True):
        """Conjugate by exp(-i*theta/2 * P); at most 2x the terms, canonical."""
        if rot.generator.n != self.n:
            raise DimensionError(f"qubit counts differ: {self.n} != {rot.generator.n}")
        cols = _rotation_columns(*self._columns(), rot)
        if combine:
            cols = _combine_columns(*cols, eps)
        return type(self)._from_columns(self.n, *cols)

    def truncate(self, eps: float):
        """Drop terms with |coeff| <= eps, preserving order and phases."""
        if eps < 0:
            raise ValueError("eps must be >= 0")
        x, z, flags, coeffs = self._columns()
        keep = np.abs(coeffs) > eps
        return type(self)._from_columns(
            self.n,
            np.ascontiguousarray(x[keep]),
            np.ascontiguousarray(z[keep]),
            flags[keep].copy(),
            coeffs[keep].copy(),
        )

    def __eq__(self, other) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        ax, az, af, ac = self._columns()
        bx, bz, bf, bc = other._columns()
        return (
            self.n == other.n
            and np.array_equal(ax, bx)
            and np.array_equal(az, bz)
            and np.array_equal(af, bf)
            and np.array_equal(ac, bc)
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, terms={len(self)})"


class PauliSum(_SumBase):
    """Array-of-structures sum: one packed record per term."""

    __slots__ = ("n", "tier", "_data")

    def __init__(self, n: int, data: np.ndarray | None = None):
        self.n = int(n)
        self.tier = tier_for(self.n)
        dtype = aos_dtype(self.tier // 64)
        if data is None:
            data = np.empty(0, dtype=dtype)
        if data.dtype != dtype:
            raise ValueError(f"expected dtype {dtype}, got {data.dtype}")
        _check_finite(data["coeff"])
        self._data = data

    @classmethod
    def _from_columns(cls, n, x, z, flags, coeffs):
        _check_finite(coeffs)
        out = cls(n)
        data = np.empty(x.shape[0], dtype=aos_dtype(x.shape[1]))
        data["x"] = x
        data["z"] = z
        data["flags"] = flags
        data["coeff"] = coeffs
        out._data = data
        return out

    def _columns(self):
        d = self._data
        return d["x"], d["z"], d["flags"], d["coeff"]

    def _gate_views(self):
        d = self._data
        return d["x"], d["z"], d["flags"]

    @property
    def coeffs(self) -> np.ndarray:
        return self._data["coeff"]

    @property
    def flags(self) -> np.ndarray:
        return self._data["flags"]

    @property
    def x_matrix(self) -> np.ndarray:
        return self._data["x"]

    @property
    def z_matrix(self) -> np.ndarray:
        return self._data["z"]

    @property
    def payload_nbytes(self) -> int:
        """Exact bytes of term storage (records are packed, no padding)."""
        return self._data.nbytes

    def to_soa(self) -> "PauliSumSoA":
        """Transpose into the struct-of-arrays layout; exact bijection."""
        d = self._data
        return PauliSumSoA(
            self.n,
            np.ascontiguousarray(d["x"].T),
            np.ascontiguousarray(d["z"].T),
            d["flags"].copy(),
            d["coeff"].copy(),
        )


class PauliSumSoA(_SumBase):
    """Struct-of-arrays sum: all terms' words for one word index contiguous.

    x[w] and z[w] are length-M arrays holding word w of every term; a
    single-qubit gate on qubit q touches only x[q//64], z[q//64], flags.
    """

    __slots__ = ("n", "tier", "x", "z", "flags", "coeffs")

    def __init__(self, n, x, z, flags, coeffs):
        self.n = int(n)
        self.tier = tier_for(self.n)
        words = self.tier // 64
        x = np.ascontiguousarray(x, dtype=np.uint64)
        z = np.ascontiguousarray(z, dtype=np.uint64)
        m = x.shape[1] if x.ndim == 2 else 0
        if x.shape != (words, m) or z.shape != (words, m):
            raise ValueError(f"expected ({words}, M) word arrays, got {x.shape} and {z.shape}")
        self.x = x
        self.z = z
        self.flags = np.ascontiguousarray(flags, dtype=np.uint8)
        self.coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
        if self.flags.shape != (m,) or self.coeffs.shape != (m,):
            raise ValueError("flags and coeffs must have one entry per term")
        _check_finite(self.coeffs)

    @classmethod
    def _from_columns(cls, n, x, z, flags, coeffs):
        return cls(n, np.ascontiguousarray(x.T), np.ascontiguousarray(z.T), flags, coeffs)

    def _columns(self):
        return self.x.T, self.z.T, self.flags, self.coeffs

    def _gate_views(self):
        return self.x.T, self.z.T, self.flags

    @property
    def payload_nbytes(self) -> int:
        return self.x.nbytes + self.z.nbytes + self.flags.nbytes + self.coeffs.nbytes

    def to_aos(self) -> PauliSum:
        """Inverse of PauliSum.to_soa; exact bijection."""
        return PauliSum._from_columns(
            self.n,
            np.ascontiguousarray(self.x.T),
            np.ascontiguousarray(self.z.T),
            self.flags.copy(),
            self.coeffs.copy(),
        )


def sum_from_terms(entries: Iterable[TermEntry], n: int | None = None) -> PauliSum:
    return PauliSum.from_terms(entries, n)


def sort_and_combine(s, eps: float = 0.0):
    return s.sort_and_combine(eps)


def sum_multiply(a, b, *, threads: int = 1, eps: float = 0.0, combine: bool = True):
    return a.multiply(b, threads=threads, eps=eps, combine=combine)


def sum_apply_clifford(s, gate: str, qubits) -> None:
    s.apply_clifford(gate, qubits)


def sum_apply_rotation(s, rot: RotationSpec, *, eps: float = 0.0, combine: bool = True):
    return s.apply_rotation(rot, eps=eps, combine=combine)


def to_soa(s: PauliSum) -> PauliSumSoA:
    return s.to_soa()


def to_aos(s: PauliSumSoA) -> PauliSum:
    return s.to_aos()


def truncate(s, eps: float):
    return s.truncate(eps)
