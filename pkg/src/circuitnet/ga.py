"""Genetic search for feedback functions with a prescribed cycle structure.

A gene is a truth table.  Each generation keeps the ``elite_count`` fittest
genes unchanged and refills the population with uniform-crossover children
of two elites chosen uniformly at random, each child then bit-flip mutated.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .core import ContractViolation, StateAnalysis, TruthTable, analyze, batch_stats

log = logging.getLogger(__name__)

FITNESS_MODES = ("penalty", "printed", "r_only")


def default_m(n: int) -> int:
    """Smallest offset that keeps every penalty-mode fitness positive."""
    return (1 << (2 * n)) + (1 << (2 * n - 2)) + 1


@dataclass(frozen=True)
class GaConfig:
    n: int
    target_r: int
    target_d: int
    m: int | None = None
    population: int = 1000
    elite_count: int = 10
    mutation_rate: float = 0.01
    max_generations: int = 10_000
    seed: int = 0
    # "penalty": m - (r'-r)^2 - (d'-d)^2
    # "printed": m - (r'-r)^2 + (d'-d)^2
    # "r_only":  m - (r'-r)^2
    fitness_mode: str = "penalty"
    trace_every: int = 1

    def __post_init__(self):
        if not 1 <= self.n <= 16:
            raise ContractViolation(f"n must be in [1, 16], got {self.n}")
        if not 1 <= self.target_r <= 1 << self.n:
            raise ContractViolation(f"target_r must be in [1, {1 << self.n}], got {self.target_r}")
        if not 0 <= self.target_d <= 1 << (self.n - 1):
            raise ContractViolation(f"target_d must be in [0, {1 << (self.n - 1)}], got {self.target_d}")
        if not 0 < self.elite_count < self.population:
            raise ContractViolation("need 0 < elite_count < population")
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ContractViolation("mutation_rate must be a probability")
        if self.max_generations < 0:
            raise ContractViolation("max_generations must be >= 0")
        if self.fitness_mode not in FITNESS_MODES:
            raise ContractViolation(f"fitness_mode must be one of {FITNESS_MODES}")
        if self.trace_every < 1:
            raise ContractViolation("trace_every must be >= 1")
        if self.m is None:
            object.__setattr__(self, "m", default_m(self.n))


@dataclass
class GaResult:
    config: GaConfig
    best_gene: TruthTable
    best_analysis: StateAnalysis
    best_fitness: int
    generations_run: int
    success: bool
    fitness_trace: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        k = self.config.trace_every
        return {
            "config": asdict(self.config),
            "best_gene": self.best_gene.to_hex(),
            "r": self.best_analysis.max_cycle_r,
            "d": self.best_analysis.goe_count_d,
            "fitness": self.best_fitness,
            "generations_run": self.generations_run,
            "success": self.success,
            "fitness_trace": self.fitness_trace[::k],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _fitness_values(r, d, cfg: GaConfig):
    dr = (cfg.target_r - r) ** 2
    dd = (cfg.target_d - d) ** 2
    if cfg.fitness_mode == "penalty":
        return cfg.m - dr - dd
    if cfg.fitness_mode == "printed":
        return cfg.m - dr + dd
    return cfg.m - dr


def fitness(gene: TruthTable, cfg: GaConfig) -> int:
    if gene.n != cfg.n:
        raise ContractViolation(f"gene width {gene.n} does not match config n={cfg.n}")
    a = analyze(gene)
    return int(_fitness_values(a.max_cycle_r, a.goe_count_d, cfg))


def _crossover_rows(a: np.ndarray, b: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    take_a = rng.random(a.shape) < 0.5
    return np.where(take_a, a, b)


def _mutate_rows(genes: np.ndarray, rate: float, rng: np.random.Generator) -> np.ndarray:
    flips = rng.random(genes.shape) < rate
    return genes ^ flips.astype(genes.dtype)


def _as_row(gene: TruthTable) -> np.ndarray:
    return np.array(gene.bits, dtype=np.uint8)


def _from_row(n: int, row: np.ndarray) -> TruthTable:
    return TruthTable(n, tuple(bool(b) for b in row))


def uniform_crossover(a: TruthTable, b: TruthTable, rng: np.random.Generator) -> TruthTable:
    if a.n != b.n:
        raise ContractViolation(f"parent widths differ: {a.n} vs {b.n}")
    return _from_row(a.n, _crossover_rows(_as_row(a), _as_row(b), rng))


def mutate(gene: TruthTable, rate: float, rng: np.random.Generator) -> TruthTable:
    if not 0.0 <= rate <= 1.0:
        raise ContractViolation("rate must be a probability")
    return _from_row(gene.n, _mutate_rows(_as_row(gene), rate, rng))


def _random_rows(cfg: GaConfig, rng: np.random.Generator) -> np.ndarray:
    return rng.integers(0, 2, size=(cfg.population, 1 << cfg.n), dtype=np.uint8)


def random_population(cfg: GaConfig, rng: np.random.Generator) -> list[TruthTable]:
    return [_from_row(cfg.n, row) for row in _random_rows(cfg, rng)]


def _evaluate(genes: np.ndarray, threads: int) -> tuple[np.ndarray, np.ndarray]:
    if threads <= 1 or len(genes) < 2 * threads:
        return batch_stats(genes)
    chunks = np.array_split(genes, threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(batch_stats, chunks))
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def evolve(
    cfg: GaConfig,
    initial: Sequence[TruthTable] = (),
    threads: int = 1,
) -> GaResult:
    """Run the search until the best gene hits ``(target_r, target_d)`` or the cap.

    ``initial`` genes replace the first rows of the random starting
    population.  Results depend only on ``cfg`` and ``initial``; ``threads``
    only splits fitness evaluation.
    """
    rng = np.random.default_rng(cfg.seed)
    genes = _random_rows(cfg, rng)
    if len(initial) > cfg.population:
        raise ContractViolation("more initial genes than population slots")
    for i, g in enumerate(initial):
        if g.n != cfg.n:
            raise ContractViolation(f"initial gene width {g.n} does not match n={cfg.n}")
        genes[i] = _as_row(g)

    trace = []
    offspring = cfg.population - cfg.elite_count
    generation = 0
    while True:
        r, d = _evaluate(genes, threads)
        fit = _fitness_values(r.astype(np.int64), d.astype(np.int64), cfg)
        order = np.argsort(-fit, kind="stable")
        best = order[0]
        trace.append(int(fit[best]))
        hit = r[best] == cfg.target_r and d[best] == cfg.target_d
        if hit or generation == cfg.max_generations:
            break
        elites = genes[order[: cfg.elite_count]]
        a = elites[rng.integers(0, cfg.elite_count, size=offspring)]
        b = elites[rng.integers(0, cfg.elite_count, size=offspring)]
        children = _mutate_rows(_crossover_rows(a, b, rng), cfg.mutation_rate, rng)
        genes = np.concatenate([elites, children])
        generation += 1
        if generation % 1000 == 0:
            log.info("generation %d: best fitness %d", generation, trace[-1])

    best_gene = _from_row(cfg.n, genes[best])
    best_analysis = analyze(best_gene)
    if (best_analysis.max_cycle_r, best_analysis.goe_count_d) != (int(r[best]), int(d[best])):
        raise RuntimeError(
            f"verification failed for {best_gene.to_hex()}: batch ({r[best]}, {d[best]}) vs "
            f"exact ({best_analysis.max_cycle_r}, {best_analysis.goe_count_d})")
    return GaResult(
        config=cfg,
        best_gene=best_gene,
        best_analysis=best_analysis,
        best_fitness=int(fit[best]),
        generations_run=generation,
        success=bool(hit),
        fitness_trace=trace,
    )
