"""Throughput and accounting harness.

Each repetition draws fresh random input and runs every requested scheme on
it in turn, so slow drift in machine speed affects all schemes alike.  Timing
covers the in-memory share call only; nothing touches the disk.
"""

from __future__ import annotations

import csv
import gc
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from kexshard.core.counters import OpCounters
from kexshard.core.rng import DeterministicRng
from kexshard.errors import ContractViolation
from kexshard.schemes import FragmentationPolicy, SchemeId, make_scheme

CSV_HEADER = ["schemeId", "inputBytes", "throughputMBps", "xorOps", "cipherCalls", "storedBytes", "mean", "std"]
PHASES = ("encrypt", "transform", "pss", "fragment")
DEFAULT_REPS = 30
MB = 1_000_000


@dataclass
class BenchResult:
    scheme_id: SchemeId
    input_bytes: int
    n: int
    seconds: list[float]
    counters: OpCounters
    stored_bytes: int
    ciphertext_blocks: int
    phase_means: dict = field(default_factory=dict)

    @property
    def mean(self) -> float:
        return statistics.fmean(self.seconds)

    @property
    def std(self) -> float:
        return statistics.stdev(self.seconds) if len(self.seconds) > 1 else 0.0

    @property
    def throughput_mbps(self) -> float:
        return self.input_bytes / self.mean / MB

    def as_dict(self) -> dict:
        return {
            "scheme": self.scheme_id.name,
            "input_bytes": self.input_bytes,
            "n": self.n,
            "reps": len(self.seconds),
            "mean": self.mean,
            "std": self.std,
            "throughput_mbps": self.throughput_mbps,
            "xor_ops": self.counters.xor_block_ops,
            "cipher_calls": self.counters.cipher_block_calls,
            "ro_blocks": self.counters.ro_blocks_generated,
            "passes": self.counters.passes,
            "stored_bytes": self.stored_bytes,
            "ciphertext_blocks": self.ciphertext_blocks,
            "phase_means": dict(self.phase_means),
        }


def run_bench(schemes: Sequence[SchemeId], sizes: Sequence[int], reps: int = DEFAULT_REPS, rng=None,
              n: int = 4, bits: int = 128, policy: FragmentationPolicy = FragmentationPolicy.CONTIGUOUS,
              warmup: int = 1) -> list[BenchResult]:
    if reps < 1:
        raise ContractViolation("reps must be at least 1")
    block_bytes = bits // 8
    if any(size < block_bytes for size in sizes):
        raise ContractViolation(f"sizes must be at least one block ({block_bytes} bytes)")
    rng = rng or DeterministicRng(0)
    keys = rng.spawn(1)[0]
    built = {sid: make_scheme(sid, bits, key=keys.block(bits), outer_key=keys.block(bits)) for sid in schemes}
    results = []
    for size in sizes:
        times = {sid: [] for sid in schemes}
        phases = {sid: {p: 0.0 for p in PHASES} for sid in schemes}
        last = {}
        for rep in range(warmup + reps):
            data = rng.bytes(size)
            for sid in schemes:
                gc.collect()
                gc.disable()
                try:
                    t0 = time.perf_counter()
                    res = built[sid].share(data, n, rng, policy)
                    elapsed = time.perf_counter() - t0
                finally:
                    gc.enable()
                if rep < warmup:
                    continue
                times[sid].append(elapsed)
                for p in PHASES:
                    phases[sid][p] += res.counters.phase_seconds.get(p, 0.0)
                last[sid] = res
                del res
        for sid in schemes:
            res = last[sid]
            results.append(BenchResult(
                sid, size, n, times[sid], res.counters,
                sum(s.stored_bytes for s in res.shares), res.ciphertext_blocks,
                {p: v / reps for p, v in phases[sid].items()},
            ))
    return results


def overhead_ratio(results: Iterable[BenchResult], size: int, numerator: SchemeId = SchemeId.SSAKE,
                   denominator: SchemeId = SchemeId.BASTION, baseline: SchemeId = SchemeId.CTR_NAIVE) -> float:
    """(t_numerator - t_baseline) / (t_denominator - t_baseline) on mean times."""
    by = {r.scheme_id: r for r in results if r.input_bytes == size}
    base = by[baseline].mean
    return (by[numerator].mean - base) / (by[denominator].mean - base)


def emit_csv(results: Iterable[BenchResult], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        for r in results:
            w.writerow([r.scheme_id.name, r.input_bytes, repr(r.throughput_mbps), r.counters.xor_block_ops,
                        r.counters.cipher_block_calls, r.stored_bytes, repr(r.mean), repr(r.std)])


def read_csv(path: str | Path) -> list[dict]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    ints = ("inputBytes", "xorOps", "cipherCalls", "storedBytes")
    floats = ("throughputMBps", "mean", "std")
    for row in rows:
        row["schemeId"] = SchemeId[row["schemeId"]]
        for k in ints:
            row[k] = int(row[k])
        for k in floats:
            row[k] = float(row[k])
    return rows


def format_table(results: Sequence[BenchResult]) -> str:
    lines = [f"{'scheme':<16}{'bytes':>12}{'MB/s':>10}{'mean s':>11}{'std s':>10}{'xors':>10}{'stored':>12}"]
    for r in results:
        lines.append(f"{r.scheme_id.name:<16}{r.input_bytes:>12}{r.throughput_mbps:>10.1f}{r.mean:>11.4f}"
                     f"{r.std:>10.4f}{r.counters.xor_block_ops:>10}{r.stored_bytes:>12}")
    return "\n".join(lines)
