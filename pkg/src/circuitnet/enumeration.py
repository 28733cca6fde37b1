"""Census of cycle and Garden-of-Eden statistics over whole function families.

Histogram conventions
---------------------
A function whose single cycle runs through all ``2**n`` states (a de Bruijn
feedback function) is tallied under ``2**n - 1`` by default.  This is the
convention the published n = 2..4 tables follow; the exact periods are
available with ``fold_full_cycle=False``.  Only that one bucket differs.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import ContractViolation, batch_stats, bits_matrix

log = logging.getLogger(__name__)

BATCH = 1 << 14
CHECKPOINT_EVERY = 1 << 24


@dataclass
class CensusHistogram:
    n: int
    by_max_cycle: Counter = field(default_factory=Counter)
    by_goe_count: Counter = field(default_factory=Counter)
    total: int = 0
    fold_full_cycle: bool = True

    def add(self, r: np.ndarray, d: np.ndarray) -> None:
        if self.fold_full_cycle:
            r = np.minimum(r, (1 << self.n) - 1)
        for key, cnt in zip(*np.unique(r, return_counts=True)):
            self.by_max_cycle[int(key)] += int(cnt)
        for key, cnt in zip(*np.unique(d, return_counts=True)):
            self.by_goe_count[int(key)] += int(cnt)
        self.total += len(r)

    def merge(self, other: "CensusHistogram") -> "CensusHistogram":
        if (other.n, other.fold_full_cycle) != (self.n, self.fold_full_cycle):
            raise ContractViolation("cannot merge histograms of different kinds")
        return CensusHistogram(
            self.n,
            self.by_max_cycle + other.by_max_cycle,
            self.by_goe_count + other.by_goe_count,
            self.total + other.total,
            self.fold_full_cycle,
        )

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "total": self.total,
            "by_max_cycle": {str(k): self.by_max_cycle[k] for k in sorted(self.by_max_cycle)},
            "by_goe_count": {str(k): self.by_goe_count[k] for k in sorted(self.by_goe_count)},
        }

    @classmethod
    def from_dict(cls, data: dict, fold_full_cycle: bool = True) -> "CensusHistogram":
        return cls(
            n=int(data["n"]),
            by_max_cycle=Counter({int(k): int(v) for k, v in data["by_max_cycle"].items()}),
            by_goe_count=Counter({int(k): int(v) for k, v in data["by_goe_count"].items()}),
            total=int(data["total"]),
            fold_full_cycle=fold_full_cycle,
        )


def _range_histogram(n: int, start: int, stop: int, fold: bool) -> CensusHistogram:
    hist = CensusHistogram(n, fold_full_cycle=fold)
    for lo in range(start, stop, BATCH):
        codes = np.arange(lo, min(lo + BATCH, stop), dtype=np.uint64)
        hist.add(*batch_stats(bits_matrix(n, codes)))
    return hist


def _default_threads() -> int:
    return os.cpu_count() or 1


def _sharded(n: int, start: int, stop: int, fold: bool, threads: int) -> CensusHistogram:
    total = CensusHistogram(n, fold_full_cycle=fold)
    if threads <= 1 or stop - start <= BATCH:
        return total.merge(_range_histogram(n, start, stop, fold))
    bounds = np.linspace(start, stop, threads + 1, dtype=np.int64)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = pool.map(lambda i: _range_histogram(n, int(bounds[i]), int(bounds[i + 1]), fold),
                         range(threads))
        for part in parts:
            total = total.merge(part)
    return total


def sweep(n: int, threads: int | None = None, fold_full_cycle: bool = True) -> CensusHistogram:
    """Analyze every n-variable truth table (2 <= n <= 4)."""
    if not 2 <= n <= 4:
        raise ContractViolation(f"exhaustive sweep supports 2 <= n <= 4, got {n}; use sample_sweep "
                                "or exhaustive_sweep for larger n")
    threads = _default_threads() if threads is None else threads
    return _sharded(n, 0, 1 << (1 << n), fold_full_cycle, threads)


def exhaustive_sweep(
    n: int,
    checkpoint: str | os.PathLike | None = None,
    threads: int | None = None,
    fold_full_cycle: bool = True,
    chunk: int = CHECKPOINT_EVERY,
) -> CensusHistogram:
    """Resumable exhaustive sweep, intended for n = 5 (2**32 functions).

    Progress is written to ``checkpoint`` after every ``chunk`` functions as
    ``{"next_code": ..., "histogram": {...}}``; an existing checkpoint is
    resumed.
    """
    if not 1 <= n <= 5:
        raise ContractViolation(f"exhaustive sweep supports n <= 5, got {n}")
    threads = _default_threads() if threads is None else threads
    end = 1 << (1 << n)
    path = Path(checkpoint) if checkpoint is not None else None
    hist = CensusHistogram(n, fold_full_cycle=fold_full_cycle)
    next_code = 0
    if path is not None and path.exists():
        state = json.loads(path.read_text())
        if state["histogram"]["n"] != n or state.get("fold_full_cycle", True) != fold_full_cycle:
            raise ContractViolation(f"checkpoint {path} belongs to a different sweep")
        hist = CensusHistogram.from_dict(state["histogram"], fold_full_cycle)
        next_code = int(state["next_code"])
        log.info("resuming n=%d sweep at code %d", n, next_code)
    while next_code < end:
        stop = min(next_code + chunk, end)
        hist = hist.merge(_sharded(n, next_code, stop, fold_full_cycle, threads))
        next_code = stop
        if path is not None:
            tmp = path.with_suffix(path.suffix + ".tmp")
            tmp.write_text(json.dumps({
                "next_code": next_code,
                "fold_full_cycle": fold_full_cycle,
                "histogram": hist.to_dict(),
            }))
            tmp.replace(path)
        log.info("n=%d: %d / %d functions", n, next_code, end)
    return hist


def sample_sweep(
    n: int,
    samples: int,
    seed: int | None = 0,
    threads: int | None = None,
    fold_full_cycle: bool = True,
) -> CensusHistogram:
    """Histogram of ``samples`` uniformly drawn n-variable functions."""
    if n < 2:
        raise ContractViolation("sample_sweep needs n >= 2")
    if samples < 1:
        raise ContractViolation("samples must be >= 1")
    threads = _default_threads() if threads is None else threads
    rng = np.random.default_rng(seed)
    size = 1 << n
    batch = max(1, min(BATCH, (1 << 22) // size))
    blocks = []
    left = samples
    while left:
        k = min(batch, left)
        blocks.append(rng.integers(0, 2, size=(k, size), dtype=np.uint8))
        left -= k

    def run(block):
        h = CensusHistogram(n, fold_full_cycle=fold_full_cycle)
        h.add(*batch_stats(block))
        return h

    hist = CensusHistogram(n, fold_full_cycle=fold_full_cycle)
    if threads <= 1 or len(blocks) == 1:
        parts = map(run, blocks)
        for part in parts:
            hist = hist.merge(part)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for part in pool.map(run, blocks):
                hist = hist.merge(part)
    return hist


def joint_census(n: int) -> Counter:
    """Number of n-variable functions per exact ``(max_cycle_r, goe_count_d)`` pair."""
    if not 1 <= n <= 4:
        raise ContractViolation(f"joint census supports n <= 4, got {n}")
    joint: Counter = Counter()
    end = 1 << (1 << n)
    for lo in range(0, end, BATCH):
        codes = np.arange(lo, min(lo + BATCH, end), dtype=np.uint64)
        r, d = batch_stats(bits_matrix(n, codes))
        pairs, counts = np.unique(np.stack([r, d], axis=1), axis=0, return_counts=True)
        for (ri, di), c in zip(pairs, counts):
            joint[int(ri), int(di)] += int(c)
    return joint


def emit_histogram(h: CensusHistogram, format: str = "csv") -> str:
    if format == "json":
        return json.dumps(h.to_dict()) + "\n"
    if format != "csv":
        raise ContractViolation(f"unknown histogram format {format!r}")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["metric", "key", "count"])
    for k in sorted(h.by_goe_count):
        writer.writerow(["goe_count", k, h.by_goe_count[k]])
    for k in sorted(h.by_max_cycle):
        writer.writerow(["max_cycle", k, h.by_max_cycle[k]])
    return buf.getvalue()
