"""Temporal follow-graph reconstruction and budgeted graph-metric estimation."""

from .errors import ConvergenceError, DataError, MetricError
from .estimation import EstimateReport, EstimationConfig
from .graph import (
    Mode,
    Snapshot,
    TemporalEdgeList,
    build_snapshot,
    largest_component_ratio_series,
    undirected_projection,
)
from .timeinfer import CreationIndex, FollowerList, followback_order_histogram, infer_edge_times

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "CreationIndex",
    "DataError",
    "EstimateReport",
    "EstimationConfig",
    "FollowerList",
    "MetricError",
    "Mode",
    "Snapshot",
    "TemporalEdgeList",
    "build_snapshot",
    "followback_order_histogram",
    "infer_edge_times",
    "largest_component_ratio_series",
    "undirected_projection",
]
