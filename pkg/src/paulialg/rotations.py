"""Pauli rotation specifications and rotation reordering.

A rotation exp(-i*theta/2 * P) is described by its generator string P
(phase-free) and the angle theta. Conjugating an observable Q by it
leaves Q alone when [P, Q] = 0 and otherwise mixes in the product P*Q
with trigonometric weights; the term-level splitting lives with the sum
types, this module owns the spec type and the compile-time reordering
rule for pushing a generic rotation past a quarter-turn one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .strings import PauliString

# Trig values this close to 0 or +-1 are snapped exactly, so that angles
# representing Pauli gates (pi) and quarter turns (pi/2) produce exact
# single-term results despite sin(pi) != 0 in floating point.
TRIG_SNAP = 1e-12


def trig_values(theta: float) -> tuple[float, float]:
    """(cos(theta), sin(theta)) with near-exact values snapped to 0/+-1."""
    out = []
    for v in (math.cos(theta), math.sin(theta)):
        if abs(v) < TRIG_SNAP:
            v = 0.0
        elif abs(v - 1.0) < TRIG_SNAP:
            v = 1.0
        elif abs(v + 1.0) < TRIG_SNAP:
            v = -1.0
        out.append(v)
    return out[0], out[1]


@dataclass(frozen=True)
class RotationSpec:
    """Generator string plus angle for exp(-i*theta/2 * generator).

    The generator must be Hermitian: phase exponent 0 is kept as-is, a
    phase of -1 (exponent 2) is folded into the sign of theta, and +-i
    phases are rejected.
    """

    generator: PauliString
    theta: float

    def __post_init__(self):
        k = self.generator.phase
        if k % 2:
            raise ValueError("rotation generator must be Hermitian (phase +1 or -1)")
        if k == 2:
            g = PauliString(self.generator.n, self.generator.x, self.generator.z, 0, validate=False)
            object.__setattr__(self, "generator", g)
            object.__setattr__(self, "theta", -self.theta)
        object.__setattr__(self, "theta", float(self.theta))


def reorder_rotation(nonclifford: RotationSpec, clifford_gen: PauliString) -> RotationSpec:
    """Swap a generic rotation past a quarter-turn rotation with generator P.

    Moving rotation(P', theta) from before the quarter turn to after it
    keeps P' when the generators commute and otherwise replaces it with
    i*P*P', which is again Hermitian; a -1 phase is folded into theta.
    Costs exactly one commutation check and one multiplication.
    """
    gen = nonclifford.generator
    if gen.n != clifford_gen.n:
        raise ValueError(f"qubit counts differ: {gen.n} != {clifford_gen.n}")
    if clifford_gen.phase != 0:
        raise ValueError("quarter-turn generator must carry phase exponent 0")
    if clifford_gen.commutes(gen):
        return nonclifford
    prod = clifford_gen.multiply(gen)
    k = (1 + prod.phase) % 4
    if k % 2:
        raise RuntimeError("i*P*P' came out non-Hermitian; generators were not phase-free")
    new_gen = PauliString(prod.n, prod.x, prod.z, 0, validate=False)
    theta = nonclifford.theta if k == 0 else -nonclifford.theta
    return RotationSpec(new_gen, theta)
