"""Utility modules."""

from paraxial_tomo.utils.logging import bind_run_context, get_logger, setup_logging
from paraxial_tomo.utils.parallel import chunk, map_ordered, pairwise_sum, resolve_workers

__all__ = [
    "bind_run_context",
    "get_logger",
    "setup_logging",
    "chunk",
    "map_ordered",
    "pairwise_sum",
    "resolve_workers",
]
