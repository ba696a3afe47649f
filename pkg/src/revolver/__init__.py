"""Shared-memory balanced graph partitioning with weighted learning automata."""

from .engine import RunConfig, RunResult, hash_partition, range_partition, revolver_run, spinner_run
from .estimator import (
    HashPartitioner,
    RangePartitioner,
    RevolverPartitioner,
    SpinnerPartitioner,
    check_graph,
)
from .graph import Graph, compute_stats, load_edge_list
from .metrics import MetricsReport, evaluate
from .scoring import PartitionState

__all__ = [
    "Graph",
    "HashPartitioner",
    "MetricsReport",
    "PartitionState",
    "RangePartitioner",
    "RevolverPartitioner",
    "RunConfig",
    "RunResult",
    "SpinnerPartitioner",
    "check_graph",
    "compute_stats",
    "evaluate",
    "hash_partition",
    "load_edge_list",
    "range_partition",
    "revolver_run",
    "spinner_run",
]

__version__ = "0.1.0"
