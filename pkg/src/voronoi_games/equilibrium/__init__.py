"""Equilibrium search: enumeration, dynamics, backtracking and the arc potential."""

from .dynamics import (
    DynamicsOutcome,
    DynamicsStatus,
    MoveEvent,
    multi_start_search,
    random_profile,
    run_best_response,
)
from .enumeration import enumerate_pne, enumerate_pne_vectorized
from .potential import ArcMultiset, PotentialOrder, improving_move_potential_ok, potential_compare
from .search import SearchResult, find_pne_backtracking
from .traces import DynamicsTraceWriter, open_trace

__all__ = [
    "DynamicsOutcome",
    "DynamicsStatus",
    "MoveEvent",
    "multi_start_search",
    "random_profile",
    "run_best_response",
    "enumerate_pne",
    "enumerate_pne_vectorized",
    "ArcMultiset",
    "PotentialOrder",
    "improving_move_potential_ok",
    "potential_compare",
    "SearchResult",
    "find_pne_backtracking",
    "DynamicsTraceWriter",
    "open_trace",
]
