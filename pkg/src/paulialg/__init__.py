"""High-throughput generalized Pauli algebra.

Bit-packed Pauli strings with exact phase tracking, weighted Pauli sums
in array-of-structures and struct-of-arrays layouts, sort-and-merge
canonicalization, Clifford and rotation conjugation, greedy commutation
grouping, seeded instance generation, and a benchmark CLI.
"""

from .bits import (
    CAPACITY_TIERS,
    MAX_QUBITS,
    CapacityError,
    DimensionError,
    LabelError,
    tier_for,
)
from .grouping import (
    CommutationPartition,
    GroupingStats,
    ValidationReport,
    group_greedy,
    group_greedy_parallel,
    validate_partition,
)
from .hamio import HamiltonianFormatError, read_hamiltonian, write_hamiltonian
from .rng import SplitMix64, random_string, random_sum
from .rotations import RotationSpec, reorder_rotation
from .strings import (
    PauliString,
    product_phase_exponent,
    ps_apply_clifford,
    ps_commutes,
    ps_from_label,
    ps_multiply,
    ps_to_label,
    ps_weight,
    symplectic_inner_product,
)
from .sums import (
    PauliSum,
    PauliSumSoA,
    PauliTerm,
    sort_and_combine,
    sum_apply_clifford,
    sum_apply_rotation,
    sum_from_terms,
    sum_multiply,
    to_aos,
    to_soa,
    truncate,
)

__version__ = "0.1.0"

__all__ = [
    "CAPACITY_TIERS",
    "MAX_QUBITS",
    "CapacityError",
    "CommutationPartition",
    "DimensionError",
    "GroupingStats",
    "HamiltonianFormatError",
    "LabelError",
    "PauliString",
    "PauliSum",
    "PauliSumSoA",
    "PauliTerm",
    "RotationSpec",
    "SplitMix64",
    "ValidationReport",
    "group_greedy",
    "group_greedy_parallel",
    "product_phase_exponent",
    "ps_apply_clifford",
    "ps_commutes",
    "ps_from_label",
    "ps_multiply",
    "ps_to_label",
    "ps_weight",
    "random_string",
    "random_sum",
    "read_hamiltonian",
    "reorder_rotation",
    "sort_and_combine",
    "sum_apply_clifford",
    "sum_apply_rotation",
    "sum_from_terms",
    "sum_multiply",
    "symplectic_inner_product",
    "tier_for",
    "to_aos",
    "to_soa",
    "truncate",
    "validate_partition",
    "write_hamiltonian",
    "__version__",
]
