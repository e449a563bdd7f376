"""Coupled Stokes-Darcy IMEX solver (Python bindings)."""

from ._sdflow import (
    Case,
    ConvergenceLevel,
    ConvergenceRate,
    ConvergenceReport,
    MonitorSample,
    PhysicalParams,
    Scheme,
    SchemeConfig,
    StabilityError,
    Start,
    TransientResult,
    emit_report_csv,
    emit_series_csv,
    emit_series_plot,
    factorization_count,
    run_convergence,
    run_longtime,
    scalar_model,
    snap_time_step,
)

__all__ = [
    "Case",
    "ConvergenceLevel",
    "ConvergenceRate",
    "ConvergenceReport",
    "MonitorSample",
    "PhysicalParams",
    "Scheme",
    "SchemeConfig",
    "StabilityError",
    "Start",
    "TransientResult",
    "emit_report_csv",
    "emit_series_csv",
    "emit_series_plot",
    "factorization_count",
    "run_convergence",
    "run_longtime",
    "scalar_model",
    "snap_time_step",
]
