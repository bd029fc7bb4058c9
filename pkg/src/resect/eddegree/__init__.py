"""Euclidean-distance-degree laboratory: rational parametrizations of
resectioning and multiview varieties, critical systems for the geometric
error, predictor-corrector path tracking, monodromy solution counting, and
the closed-form degree evaluators."""

from .formulas import formula_multiview, formula_resectioning
from .maps import ChartViolationError, MultiviewMap, ResectioningMap
from .monodromy import MonodromyReport, MonodromySettings, monodromy_count
from .systems import CriticalSystem, build_critical_system, seed_solution
from .tracker import PathStatus, TrackSettings, track

__all__ = [
    "ChartViolationError",
    "CriticalSystem",
    "MonodromyReport",
    "MonodromySettings",
    "MultiviewMap",
    "PathStatus",
    "ResectioningMap",
    "TrackSettings",
    "build_critical_system",
    "formula_multiview",
    "formula_resectioning",
    "monodromy_count",
    "seed_solution",
    "track",
]
