"""Relative-entropy and mean-field verification toolkit."""

from ._core import (
    ArgumentError,
    BoundParams,
    Error,
    NumericalError,
    bound_f,
    bound_g,
    count_patterns,
    frechet_log,
    frechet_log_quadrature,
    hbar_crossing,
    matrix_log,
    partial_trace,
    relative_entropy,
    run_scenario,
    run_suite,
    stirling2_assoc,
    trace_distance,
    von_neumann_entropy,
)

__all__ = [
    "ArgumentError",
    "BoundParams",
    "Error",
    "NumericalError",
    "bound_f",
    "bound_g",
    "count_patterns",
    "frechet_log",
    "frechet_log_quadrature",
    "hbar_crossing",
    "matrix_log",
    "partial_trace",
    "relative_entropy",
    "run_scenario",
    "run_suite",
    "stirling2_assoc",
    "trace_distance",
    "von_neumann_entropy",
]
