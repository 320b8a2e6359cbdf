from .aspects import Aspect, apply_before_advice, equivalent_traces
from .growth import (
    FeatureCost,
    FitResult,
    GrowthRow,
    avg_sloc_per_feature,
    fit_exponential,
    growth_points,
    growth_total,
    project,
    read_growth_csv,
)
from .hierarchy import HierarchyStats, hierarchy_stats, to_dot, to_text_tree

__all__ = [
    "Aspect",
    "FeatureCost",
    "FitResult",
    "GrowthRow",
    "HierarchyStats",
    "apply_before_advice",
    "avg_sloc_per_feature",
    "equivalent_traces",
    "fit_exponential",
    "growth_points",
    "growth_total",
    "hierarchy_stats",
    "project",
    "read_growth_csv",
    "to_dot",
    "to_text_tree",
]
