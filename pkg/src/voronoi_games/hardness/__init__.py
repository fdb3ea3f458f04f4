"""Monotone 1-in-3 SAT reduction to the One-Way maximisation game."""

from .equivalence import (
    EquivalenceReport,
    check_equivalence,
    complete_shadows,
    extract_assignment,
    search_order,
)
from .formula import (
    Monotone1in3Formula,
    SatWitness,
    dump_formula,
    format_formula,
    load_formula,
    parse_formula,
    small_formulas,
    solve_1in3,
)
from .reduction import (
    PlayerRole,
    RoleTaggedInstance,
    attach_ueg,
    build_game,
    dump_roles,
    max_epsilon,
    pad_candidates,
    role_document,
)

__all__ = [
    "EquivalenceReport",
    "check_equivalence",
    "complete_shadows",
    "extract_assignment",
    "search_order",
    "Monotone1in3Formula",
    "SatWitness",
    "dump_formula",
    "format_formula",
    "load_formula",
    "parse_formula",
    "small_formulas",
    "solve_1in3",
    "PlayerRole",
    "RoleTaggedInstance",
    "attach_ueg",
    "build_game",
    "dump_roles",
    "max_epsilon",
    "pad_candidates",
    "role_document",
]
