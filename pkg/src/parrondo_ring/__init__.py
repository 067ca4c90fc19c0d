"""Spatially dependent Parrondo games on a ring of players: exact per-turn
means via symmetry-reduced Markov chains, Monte Carlo cross-validation, and
parameter-region mapping."""

from .games import (
    Configuration,
    ParamVector,
    PatternSpec,
    TransitionMatrix,
    build_game_a,
    build_game_b,
    build_game_b_signed,
    neighbor_index,
)
from .symmetry import (
    QuotientModel,
    SymmetryGroup,
    act,
    bracelet_count,
    build_classes,
    check_invariance,
    necklace_count,
    quotient,
)
from .stationary import (
    NonStochastic,
    ReducibleCase,
    SolverFailure,
    StationaryResult,
    UnsupportedBoundary,
    classify_boundary,
    pattern_stationary,
    solve_stationary,
)
from .means import (
    ProfitReport,
    closed_form_n3,
    full_state_mean,
    mean_for,
    mean_game_b,
    mean_mixture,
    mean_pattern,
    six_significant,
)
from .montecarlo import SimulationRun, SllnReport, simulate, slln_check
from .region import (
    ConditionReport,
    RegionPoint,
    ScanResult,
    classify_point,
    condition_volumes,
    ergodicity_conditions,
    sample_volumes,
    scan,
    symmetry_map,
)

__version__ = "0.1.0"

__all__ = [
    "Configuration",
    "ParamVector",
    "PatternSpec",
    "TransitionMatrix",
    "build_game_a",
    "build_game_b",
    "build_game_b_signed",
    "neighbor_index",
    "QuotientModel",
    "SymmetryGroup",
    "act",
    "bracelet_count",
    "build_classes",
    "check_invariance",
    "necklace_count",
    "quotient",
    "NonStochastic",
    "ReducibleCase",
    "SolverFailure",
    "StationaryResult",
    "UnsupportedBoundary",
    "classify_boundary",
    "pattern_stationary",
    "solve_stationary",
    "ProfitReport",
    "closed_form_n3",
    "full_state_mean",
    "mean_for",
    "mean_game_b",
    "mean_mixture",
    "mean_pattern",
    "six_significant",
    "SimulationRun",
    "SllnReport",
    "simulate",
    "slln_check",
    "ConditionReport",
    "RegionPoint",
    "ScanResult",
    "classify_point",
    "condition_volumes",
    "ergodicity_conditions",
    "sample_volumes",
    "scan",
    "symmetry_map",
]
