"""Chiplet arrangement generation, analysis and interconnect simulation."""

from ._core import (
    Arrangement,
    ArrangementKind,
    ChipletError,
    ChipletPlacement,
    LinkBudget,
    LinkParams,
    MetricsReport,
    Regularity,
    SaturationProbe,
    SaturationResult,
    ShapeSolution,
    SimConfig,
    SimResult,
    analytic_zero_load,
    arrangement_from_json,
    asymptotic_ratios,
    build_arrangement,
    chiplet_area,
    compute_metrics,
    evaluate_point,
    exhaustive_bisection,
    find_saturation,
    formula_bisection,
    formula_diameter,
    heuristic_bisection,
    link_bandwidth,
    run,
    shape_for,
    simulate,
    throughput_tbps,
)

__all__ = [name for name in dir() if not name.startswith("_")]
