"""Benchmark harness: seeded workloads, min-of-N timing, CSV records.

Four categories mirror the library's evaluation surface:

- pair-mul:  time per string*string product, per-object loop ("string")
             and a batched array kernel ("batch").
- sum-mul:   full outer product of two equal-size random sums.
- grouping:  greedy commutation grouping, sequential and (when threads
             > 1) the two-phase parallel variant.
- memory:    theoretical bytes/term from the layout arithmetic plus the
             measured live payload, for both layouts.

Each timing is the minimum over `repeats` runs after `warmups` warm-up
iterations. Workloads are reproducible from the seed; timings are not
asserted here, only recorded.
"""

from __future__ import annotations

import csv
import io
import os
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .grouping import group_greedy, group_greedy_parallel
from .rng import random_sum
from .strings import _phase_exponent_words
from .sums import PauliSum, PauliSumSoA

CATEGORIES = ("pair-mul", "sum-mul", "grouping", "memory")

DEFAULT_SIZES = {
    "pair-mul": (100, 200, 500, 1000),
    "sum-mul": (25, 50, 100, 200),
    "grouping": (100, 200, 500, 1000),
    "memory": (10000,),
}

CSV_COLUMNS = ("category", "variant", "n", "size", "metric", "value", "units", "seed")


@dataclass
class BenchConfig:
    category: str
    n_qubits: int = 500
    sizes: Sequence[int] = ()
    seed: int = 1
    repeats: int = 5
    warmups: int = 3
    threads: int = 1
    eps: float = 0.0
    out: str | None = None

    def __post_init__(self):
        if self.category not in CATEGORIES:
            raise ValueError(f"unknown category {self.category!r}; expected one of {CATEGORIES}")
        if not self.sizes:
            self.sizes = DEFAULT_SIZES[self.category]
        self.sizes = tuple(int(s) for s in self.sizes)
        if any(s < 0 for s in self.sizes):
            raise ValueError("sizes must be non-negative")
        if self.repeats < 1:
            raise ValueError("repeats must be >= 1")
        if self.warmups < 0:
            raise ValueError("warmups must be >= 0")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


@dataclass
class BenchRecord:
    category: str
    variant: str
    n: int
    size: int
    metric: str
    value: float
    units: str
    seed: int

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("metric values must be >= 0")

    def to_row(self) -> list[str]:
        return [
            self.category,
            self.variant,
            str(self.n),
            str(self.size),
            self.metric,
            repr(float(self.value)),
            self.units,
            str(self.seed),
        ]

    @classmethod
    def from_row(cls, row: Sequence[str]) -> "BenchRecord":
        return cls(
            category=row[0],
            variant=row[1],
            n=int(row[2]),
            size=int(row[3]),
            metric=row[4],
            value=float(row[5]),
            units=row[6],
            seed=int(row[7]),
        )


def write_records(path, records: Iterable[BenchRecord]) -> None:
    if hasattr(path, "write"):
        _emit_csv(path, records)
        return
    with open(path, "w", newline="", encoding="ascii") as fh:
        _emit_csv(fh, records)


def _emit_csv(fh, records) -> None:
    writer = csv.writer(fh)
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        writer.writerow(rec.to_row())


def read_records(path) -> list[BenchRecord]:
    if hasattr(path, "read"):
        return _parse_csv(path)
    with open(path, "r", newline="", encoding="ascii") as fh:
        return _parse_csv(fh)


def _parse_csv(fh) -> list[BenchRecord]:
    reader = csv.reader(fh)
    header = next(reader, None)
    if header is None or tuple(header) != CSV_COLUMNS:
        raise ValueError(f"expected CSV header {','.join(CSV_COLUMNS)}")
    return [BenchRecord.from_row(row) for row in reader if row]


def _time_min_ns(fn, repeats: int, warmups: int) -> int:
    for _ in range(warmups):
        fn()
    best = None
    for _ in range(repeats):
        t0 = time.perf_counter_ns()
        fn()
        t1 = time.perf_counter_ns()
        if best is None or t1 - t0 < best:
            best = t1 - t0
    return int(best)


def _rss_bytes() -> int | None:
    """Current resident set size from /proc, None when unavailable."""
    try:
        with open("/proc/self/statm") as fh:
            pages = int(fh.read().split()[1])
        return pages * os.sysconf("SC_PAGE_SIZE")
    except (OSError, ValueError, IndexError):
        return None


def _batch_pair_multiply(ax, az, aflags, bx, bz, bflags):
    """Elementwise multiply of aligned term arrays (the batched kernel)."""
    x = ax ^ bx
    z = az ^ bz
    k = (
        aflags.astype(np.int64)
        + bflags.astype(np.int64)
        + _phase_exponent_words(ax, az, bx, bz)
    ) % 4
    return x, z, k.astype(np.uint8)


def _bench_pair_mul(cfg: BenchConfig) -> list[BenchRecord]:
    records = []
    for size in cfg.sizes:
        a = random_sum(cfg.n_qubits, size, cfg.seed)
        b = random_sum(cfg.n_qubits, size, cfg.seed + 1)
        pairs = [(a.term(i).string, b.term(i).string) for i in range(size)]

        def run_strings():
            for u, v in pairs:
                u.multiply(v)

        ax, az, aflags, _ = a._columns()
        bx, bz, bflags, _ = b._columns()
        ax, az = np.ascontiguousarray(ax), np.ascontiguousarray(az)
        bx, bz = np.ascontiguousarray(bx), np.ascontiguousarray(bz)

        def run_batch():
            _batch_pair_multiply(ax, az, aflags, bx, bz, bflags)

        for variant, fn in (("string", run_strings), ("batch", run_batch)):
            total = _time_min_ns(fn, cfg.repeats, cfg.warmups)
            records.append(
                BenchRecord(
                    "pair-mul", variant, cfg.n_qubits, size,
                    "time_per_op", total / max(size, 1), "ns/op", cfg.seed,
                )
            )
    return records


def _bench_sum_mul(cfg: BenchConfig) -> list[BenchRecord]:
    records = []
    for size in cfg.sizes:
        a = random_sum(cfg.n_qubits, size, cfg.seed)
        b = random_sum(cfg.n_qubits, size, cfg.seed + 1)
        result = {}

        def run():
            result["out"] = a.multiply(b, threads=cfg.threads, eps=cfg.eps)

        total = _time_min_ns(run, cfg.repeats, cfg.warmups)
        variant = f"threads-{cfg.threads}"
        records.append(
            BenchRecord("sum-mul", variant, cfg.n_qubits, size,
                        "time_total", total / 1e6, "ms", cfg.seed)
        )
        records.append(
            BenchRecord("sum-mul", variant, cfg.n_qubits, size,
                        "output_terms", float(len(result["out"])), "count", cfg.seed)
        )
    return records


def _bench_grouping(cfg: BenchConfig) -> list[BenchRecord]:
    records = []
    for size in cfg.sizes:
        s = random_sum(cfg.n_qubits, size, cfg.seed)
        variants = [("sequential", lambda: group_greedy(s))]
        if cfg.threads > 1:
            variants.append(
                (f"parallel-{cfg.threads}", lambda: group_greedy_parallel(s, cfg.threads))
            )
        counts = {}
        for variant, fn in variants:
            total = _time_min_ns(fn, cfg.repeats, cfg.warmups)
            part = fn()
            counts[variant] = part.group_count()
            records.append(
                BenchRecord("grouping", variant, cfg.n_qubits, size,
                            "time_total", total / 1e6, "ms", cfg.seed)
            )
            records.append(
                BenchRecord("grouping", variant, cfg.n_qubits, size,
                            "groups", float(part.group_count()), "count", cfg.seed)
            )
        if len(counts) == 2 and len(set(counts.values())) == 2:
            # the two-phase merge may legally partition differently; flag it
            records.append(
                BenchRecord("grouping", "divergence", cfg.n_qubits, size,
                            "group_count_spread",
                            float(max(counts.values()) - min(counts.values())),
                            "count", cfg.seed)
            )
    return records


def theoretical_bytes_per_term(n: int) -> int:
    """Layout arithmetic with real-coefficient accounting: 16*words + 8 + 1."""
    from .bits import words_for

    return 16 * words_for(n) + 8 + 1


def _bench_memory(cfg: BenchConfig) -> list[BenchRecord]:
    records = []
    theory = theoretical_bytes_per_term(cfg.n_qubits)
    for size in cfg.sizes:
        rss_before = _rss_bytes()
        aos = random_sum(cfg.n_qubits, size, cfg.seed)
        soa = aos.to_soa()
        rss_after = _rss_bytes()
        for variant, payload in (("aos", aos.payload_nbytes), ("soa", soa.payload_nbytes)):
            records.append(
                BenchRecord("memory", variant, cfg.n_qubits, size,
                            "bytes_per_term_theoretical", float(theory), "bytes/term", cfg.seed)
            )
            records.append(
                BenchRecord("memory", variant, cfg.n_qubits, size,
                            "bytes_per_term_measured",
                            payload / max(size, 1), "bytes/term", cfg.seed)
            )
            records.append(
                BenchRecord("memory", variant, cfg.n_qubits, size,
                            "payload_bytes", float(payload), "bytes", cfg.seed)
            )
        if rss_before is not None and rss_after is not None:
            records.append(
                BenchRecord("memory", "rss-informative", cfg.n_qubits, size,
                            "rss_delta_bytes", float(max(0, rss_after - rss_before)),
                            "bytes", cfg.seed)
            )
        del aos, soa
    return records


_RUNNERS = {
    "pair-mul": _bench_pair_mul,
    "sum-mul": _bench_sum_mul,
    "grouping": _bench_grouping,
    "memory": _bench_memory,
}


def run_bench(cfg: BenchConfig) -> list[BenchRecord]:
    """Run one category and optionally write the CSV named in the config."""
    records = _RUNNERS[cfg.category](cfg)
    if cfg.out:
        write_records(cfg.out, records)
    return records


def records_to_csv_text(records: Iterable[BenchRecord]) -> str:
    buf = io.StringIO()
    _emit_csv(buf, records)
    return buf.getvalue()


def side_by_side(records: list[BenchRecord], baseline: list[BenchRecord]) -> str:
    """Plain-text comparison against records from an external CSV."""
    base = {(r.category, r.variant, r.n, r.size, r.metric): r for r in baseline}
    lines = [f"{'category':<10} {'variant':<14} {'size':>7} {'metric':<28} "
             f"{'value':>14} {'baseline':>14} {'ratio':>8}"]
    for r in records:
        other = base.get((r.category, r.variant, r.n, r.size, r.metric))
        if other is None:
            continue
        ratio = r.value / other.value if other.value else float("inf")
        lines.append(
            f"{r.category:<10} {r.variant:<14} {r.size:>7} {r.metric:<28} "
            f"{r.value:>14.6g} {other.value:>14.6g} {ratio:>8.3g}"
        )
    return "\n".join(lines)
