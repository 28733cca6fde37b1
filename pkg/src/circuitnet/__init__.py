"""Autonomous boolean shift-register networks: state-space analysis, census and GA search."""

from .core import (
    ContractViolation,
    StateAnalysis,
    StateClass,
    StateVector,
    TruthTable,
    TruthTableParseError,
    analyze,
    batch_stats,
    eval_state,
    format_truth_table,
    orbit,
    parse_truth_table,
    predecessors,
    step,
)
from .enumeration import CensusHistogram, emit_histogram, exhaustive_sweep, joint_census, sample_sweep, sweep
from .export import DiagramStyle, to_dot
from .ga import GaConfig, GaResult, evolve, fitness, mutate, random_population, uniform_crossover

__all__ = [
    "CensusHistogram", "ContractViolation", "DiagramStyle", "GaConfig", "GaResult", "StateAnalysis",
    "StateClass", "StateVector", "TruthTable", "TruthTableParseError", "analyze", "batch_stats",
    "emit_histogram", "eval_state", "evolve", "exhaustive_sweep", "fitness", "format_truth_table",
    "joint_census", "mutate", "orbit", "parse_truth_table", "predecessors", "random_population",
    "sample_sweep", "step", "sweep", "to_dot", "uniform_crossover",
]
