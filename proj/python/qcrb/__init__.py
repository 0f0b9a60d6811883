"""Quantum Cramer-Rao type bounds for qubit and displaced-thermal state families."""

from ._qcrb import (
    QcrbError,
    bounds,
    family_at,
    frontier_min,
    optimize,
    qubit_attainable_C,
    rld_bound_closed,
    rld_bound_oracle,
    rld_fisher,
    run_cli,
    sld_fisher,
    solve_rld,
    solve_sld,
)

__all__ = [
    "QcrbError",
    "bounds",
    "family_at",
    "frontier_min",
    "optimize",
    "qubit_attainable_C",
    "rld_bound_closed",
    "rld_bound_oracle",
    "rld_fisher",
    "run_cli",
    "sld_fisher",
    "solve_rld",
    "solve_sld",
]
