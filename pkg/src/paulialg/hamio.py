"""Hamiltonian text format: one `<re> <im> <label>` term per line.

Tokens are whitespace-separated; `#` starts a comment; blank lines are
ignored; all labels must share one length. Coefficients are written
with 17 significant digits so write/read round-trips are exact. Any
term phase flags are folded into the written coefficient.
"""

from __future__ import annotations

import os
from typing import TextIO, Union

from .bits import CapacityError, DimensionError, LabelError, PHASE_FACTORS
from .strings import PauliString
from .sums import PauliSum

PathOrFile = Union[str, os.PathLike, TextIO]


class HamiltonianFormatError(ValueError):
    """Malformed Hamiltonian file; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def read_hamiltonian(path: PathOrFile) -> PauliSum:
    """Parse a Hamiltonian file into a sum, preserving term order."""
    if hasattr(path, "read"):
        return _parse(path)
    with open(path, "r", encoding="ascii") as fh:
        return _parse(fh)


def _parse(fh: TextIO) -> PauliSum:
    entries = []
    n = None
    for lineno, raw in enumerate(fh, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) != 3:
            raise HamiltonianFormatError(
                lineno, f"expected '<re> <im> <label>', got {len(tokens)} fields"
            )
        try:
            re_part = float(tokens[0])
            im_part = float(tokens[1])
        except ValueError as exc:
            raise HamiltonianFormatError(lineno, f"bad coefficient: {exc}") from None
        label = tokens[2]
        if n is None:
            n = len(label)
        elif len(label) != n:
            raise DimensionError(
                f"line {lineno}: label length {len(label)} differs from {n} on earlier lines"
            )
        try:
            string = PauliString.from_label(label)
        except (LabelError, CapacityError) as exc:
            raise HamiltonianFormatError(lineno, str(exc)) from None
        entries.append((complex(re_part, im_part), string))
    if n is None:
        raise HamiltonianFormatError(0, "no terms found")
    return PauliSum.from_terms(entries, n)


def write_hamiltonian(path: PathOrFile, s) -> None:
    """Write a sum in the text format, coefficients at 17 significant digits."""
    if hasattr(path, "write"):
        _emit(path, s)
        return
    with open(path, "w", encoding="ascii") as fh:
        _emit(fh, s)


def _emit(fh: TextIO, s) -> None:
    x, z, flags, coeffs = s._columns()
    folded = coeffs * PHASE_FACTORS[flags]
    labels = s.labels()
    for c, label in zip(folded, labels):
        fh.write(f"{c.real:.17g} {c.imag:.17g} {label}\n")
