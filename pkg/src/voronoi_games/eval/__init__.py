"""Numeric checks and the reference tables of the empirical study."""

from .checks import CHECKS, CheckResult, list_checks, run_checks
from .references import load_reference_tables, reference_counts, reference_max_passes

__all__ = [
    "CHECKS",
    "CheckResult",
    "list_checks",
    "run_checks",
    "load_reference_tables",
    "reference_counts",
    "reference_max_passes",
]
