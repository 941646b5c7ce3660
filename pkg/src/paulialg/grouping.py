"""Greedy partitioning of a Pauli sum into mutually commuting groups.

The sequential variant scans terms in index order and drops each into
the first group whose members all commute with it (first-fit). The
parallel variant splits the index range into contiguous chunks, groups
each chunk independently, then merges local groups into global ones in
chunk order. Both always produce valid partitions; they may differ in
group count for T > 1, which callers can compare via the recorded
counts rather than assume away.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bits import popcount


@dataclass
class GroupingStats:
    """Instrumentation: number of pairwise commutation checks performed."""

    pair_checks: int = 0


@dataclass
class CommutationPartition:
    """Ordered groups of term indices, pairwise commuting within a group."""

    groups: list[list[int]]
    source_size: int

    def group_count(self) -> int:
        return len(self.groups)

    def to_text(self) -> str:
        """One group per line, space-separated term indices."""
        return "".join(" ".join(str(i) for i in g) + "\n" for g in self.groups)

    @classmethod
    def from_text(cls, text: str, source_size: int | None = None) -> "CommutationPartition":
        groups = [[int(tok) for tok in line.split()] for line in text.splitlines() if line.strip()]
        if source_size is None:
            source_size = sum(len(g) for g in groups)
        return cls(groups, source_size)


@dataclass
class ValidationReport:
    """Outcome of validate_partition; failures name the first violation."""

    ok: bool
    message: str = ""
    violation: tuple[int, int] | None = None


def _anti_parity(xt, zt, gx, gz):
    """Per-member anti-commutation bits of one term against member rows."""
    acc = popcount(xt & gz).sum(axis=-1, dtype=np.int64)
    acc = acc + popcount(zt & gx).sum(axis=-1, dtype=np.int64)
    return acc & 1


def _greedy_over(x, z, indices, stats: GroupingStats | None) -> list[list[int]]:
    """First-fit greedy grouping over the given term indices, in order."""
    groups: list[list[int]] = []
    for t in indices:
        xt = x[t]
        zt = z[t]
        placed = False
        for g in groups:
            if stats is not None:
                stats.pair_checks += len(g)
            if not _anti_parity(xt, zt, x[g], z[g]).any():
                g.append(t)
                placed = True
                break
        if not placed:
            groups.append([t])
    return groups


def _term_words(s) -> tuple[np.ndarray, np.ndarray]:
    x, z, _, _ = s._columns()
    return np.ascontiguousarray(x), np.ascontiguousarray(z)


def group_greedy(s, *, stats: GroupingStats | None = None) -> CommutationPartition:
    """Deterministic first-fit grouping; at most M^2 pairwise checks."""
    x, z = _term_words(s)
    groups = _greedy_over(x, z, range(x.shape[0]), stats)
    return CommutationPartition(groups, x.shape[0])


def group_greedy_parallel(
    s, chunks: int, *, stats: GroupingStats | None = None
) -> CommutationPartition:
    """Two-phase grouping: greedy per contiguous chunk, then a sequential merge.

    A local group joins the first global group with which every cross
    pair commutes, else it opens a new global group. With chunks=1 the
    result equals group_greedy exactly.
    """
    if chunks < 1:
        raise ValueError("chunk count must be >= 1")
    x, z = _term_words(s)
    m = x.shape[0]
    pieces = [rng for rng in np.array_split(np.arange(m), chunks) if rng.size]

    def run_chunk(rng: np.ndarray) -> tuple[list[list[int]], int]:
        local_stats = GroupingStats()
        local = _greedy_over(x, z, [int(i) for i in rng], local_stats)
        return local, local_stats.pair_checks

    if len(pieces) > 1:
        with ThreadPoolExecutor(max_workers=len(pieces)) as pool:
            results = list(pool.map(run_chunk, pieces))
    else:
        results = [run_chunk(rng) for rng in pieces]

    if stats is not None:
        stats.pair_checks += sum(r[1] for r in results)

    global_groups: list[list[int]] = []
    for local_groups, _ in results:
        for local in local_groups:
            lx = x[local]
            lz = z[local]
            placed = False
            for g in global_groups:
                if stats is not None:
                    stats.pair_checks += len(local) * len(g)
                gx = x[g]
                gz = z[g]
                cross = popcount(lx[:, None, :] & gz[None, :, :]).sum(axis=-1, dtype=np.int64)
                cross = cross + popcount(lz[:, None, :] & gx[None, :, :]).sum(axis=-1, dtype=np.int64)
                if not (cross & 1).any():
                    g.extend(local)
                    placed = True
                    break
            if not placed:
                global_groups.append(list(local))
    return CommutationPartition(global_groups, m)


def validate_partition(s, p: CommutationPartition) -> ValidationReport:
    """Check disjointness, completeness, and pairwise commutation directly."""
    x, z = _term_words(s)
    m = x.shape[0]
    if p.source_size != m:
        return ValidationReport(False, f"partition built for {p.source_size} terms, sum has {m}")
    seen = np.zeros(m, dtype=bool)
    for gi, g in enumerate(p.groups):
        for t in g:
            if not 0 <= t < m:
                return ValidationReport(False, f"group {gi} references term {t} out of range")
            if seen[t]:
                return ValidationReport(False, f"term {t} appears in more than one group")
            seen[t] = True
    if not seen.all():
        missing = int(np.flatnonzero(~seen)[0])
        return ValidationReport(False, f"term {missing} missing from the partition")
    for gi, g in enumerate(p.groups):
        for a_pos in range(len(g)):
            t = g[a_pos]
            rest = g[a_pos + 1 :]
            if not rest:
                continue
            anti = _anti_parity(x[t], z[t], x[rest], z[rest])
            bad = np.flatnonzero(anti)
            if bad.size:
                other = rest[int(bad[0])]
                return ValidationReport(
                    False,
                    f"terms {t} and {other} in group {gi} anti-commute",
                    violation=(t, other),
                )
    return ValidationReport(True, "partition valid")
