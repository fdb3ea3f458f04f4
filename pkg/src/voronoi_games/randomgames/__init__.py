"""Random instances and Monte Carlo / exact checks of the random-game bounds."""

from .bijection import is_monotone_bijection, monotone_bijection
from .equilibria import (
    lower_bound_chain,
    mean_pne_count,
    min_variant_moment,
    stable_first_choice_probability,
    stable_product_moment,
)
from .harmonic import (
    HarmonicConstants,
    harmonic_constants,
    harmonic_identity_holds_through,
    pne_count_bounds,
    product_bound_holds_through,
    smallest_n_reaching,
)
from .instances import random_instance
from .perturbation import exact_product_moment, perturb, perturbation_inequality_mc, random_dominated_matrix
from .reports import EstimatorReport, mean_and_se, write_reports
from .spacings import (
    IndependenceReport,
    SpacingRoute,
    SpacingSample,
    beta_moment_estimate,
    independence_check,
    sample_spacings,
    sample_spacings_batch,
    smallest_spacing_mean,
    spacing_marginals_ks,
)

__all__ = [
    "is_monotone_bijection",
    "monotone_bijection",
    "lower_bound_chain",
    "mean_pne_count",
    "min_variant_moment",
    "stable_first_choice_probability",
    "stable_product_moment",
    "HarmonicConstants",
    "harmonic_constants",
    "harmonic_identity_holds_through",
    "pne_count_bounds",
    "product_bound_holds_through",
    "smallest_n_reaching",
    "random_instance",
    "exact_product_moment",
    "perturb",
    "perturbation_inequality_mc",
    "random_dominated_matrix",
    "EstimatorReport",
    "mean_and_se",
    "write_reports",
    "IndependenceReport",
    "SpacingRoute",
    "SpacingSample",
    "beta_moment_estimate",
    "independence_check",
    "sample_spacings",
    "sample_spacings_batch",
    "smallest_spacing_mean",
    "spacing_marginals_ks",
]
