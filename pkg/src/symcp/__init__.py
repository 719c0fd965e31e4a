"""Static, dynamic and during-search symmetry breaking on a small finite-domain solver."""
from .engine import (ConfigError, Model, Search, SearchResult, SearchStats, Store, branch_and_bound_max,
                     search, search_with_restarts)
from .symmetry import (AffineMap, PermMap, PiecewisePartitions, PiecewiseSymmetry, Symmetry, ais_group,
                       apply_to_assignment, compose, invert, symmetry_classes)

__all__ = [
    "AffineMap", "ConfigError", "Model", "PermMap", "PiecewisePartitions", "PiecewiseSymmetry", "Search",
    "SearchResult", "SearchStats", "Store", "Symmetry", "ais_group", "apply_to_assignment",
    "branch_and_bound_max", "compose", "invert", "search", "search_with_restarts", "symmetry_classes",
]
__version__ = "0.1.0"
