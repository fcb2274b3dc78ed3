"""Isosceles three-body problem with Schwarzschild-type interaction.

Thin wrapper over the compiled ``_core`` module; see ``help(schwarziso._core)``.
"""

from ._core import (
    InvalidInput,
    ModelParams,
    RegimeError,
    classify_fate,
    cm_equilibria,
    connection_condition,
    derive,
    energy_of,
    eval_angular,
    integrate,
    planar_curve,
    planar_equilibria,
    relative_equilibria,
    run_criterion,
    sink_predicate,
    trace_manifold,
)

__all__ = [
    "InvalidInput",
    "ModelParams",
    "RegimeError",
    "classify_fate",
    "cm_equilibria",
    "connection_condition",
    "derive",
    "energy_of",
    "eval_angular",
    "integrate",
    "planar_curve",
    "planar_equilibria",
    "relative_equilibria",
    "run_criterion",
    "sink_predicate",
    "trace_manifold",
]

__version__ = "0.1.0"
