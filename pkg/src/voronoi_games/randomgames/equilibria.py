"""Expected number and stability of equilibria in uniform random games."""

from typing import Optional

import numpy as np
from opentelemetry import trace

from voronoi_games.config.settings import settings
from voronoi_games.equilibrium import enumerate_pne
from voronoi_games.errors import BudgetExceededError, PreconditionError
from voronoi_games.games import GameVariant, Objective
from voronoi_games.randomgames.harmonic import harmonic_constants, pne_count_bounds
from voronoi_games.randomgames.instances import random_instance
from voronoi_games.randomgames.reports import EstimatorReport, estimate_report, resolve_seed
from voronoi_games.randomgames.spacings import exponentials

tracer = trace.get_tracer(__name__)

_CHUNK = 1 << 14


def mean_pne_count(
    n: int,
    m: int,
    variant: GameVariant,
    objective: Objective,
    instances: int,
    seed: Optional[int] = None,
    budget: Optional[int] = None,
) -> EstimatorReport:
    """Average PNE count over random instances, one spawned seed per instance.

    One-Way reports carry the theoretical bracket from ``pne_count_bounds``.
    """
    variant = GameVariant(variant)
    objective = Objective(objective)
    budget = settings.enumeration_budget if budget is None else budget
    if m**n > budget:
        raise BudgetExceededError("PNE enumeration", m**n, budget)
    seed = resolve_seed(seed)
    counts = np.zeros(instances)
    with tracer.start_as_current_span("randomgames.mean_pne_count") as span:
        span.set_attribute("variant", variant.value)
        span.set_attribute("objective", objective.value)
        span.set_attribute("n", n)
        span.set_attribute("m", m)
        span.set_attribute("samples", instances)
        span.set_attribute("seed", seed)
        for idx, child in enumerate(np.random.SeedSequence(seed).spawn(instances)):
            instance = random_instance(n, m, variant, objective, seed=child)
            counts[idx] = len(enumerate_pne(instance, budget))
        span.set_attribute("mean", float(counts.mean()) if instances else 0.0)

    bounds = {}
    if variant is GameVariant.ONE_WAY_1D:
        lower, upper = pne_count_bounds(n, m, objective)
        bounds = {"lower": float(lower), "upper": None if upper is None else float(upper)}
    return estimate_report(f"mean_pne_count[{variant.value},{objective.value}]", counts, seed, n=n, m=m, **bounds)


def _first_choices_stable(U: np.ndarray, tolerance: float) -> np.ndarray:
    """Per row of a batch×n×m array of One-Way positions: is all-first-choices a PNE?"""
    batch, n, _ = U.shape
    stable = np.ones(batch, dtype=bool)
    if n == 1:
        return stable
    first = U[:, :, 0]
    for k in range(n):
        others = np.delete(first, k, axis=1)
        owned = ((others[:, None, :] - U[:, k, :, None]) % 1.0).min(axis=2)
        stable &= ~(owned[:, 1:] > owned[:, :1] + tolerance).any(axis=1)
    return stable


def stable_first_choice_probability(
    n: int, m: int, samples: int, seed: Optional[int] = None
) -> EstimatorReport:
    """Pr[every player's first candidate forms a PNE] in random One-Way max games; at most 1/m^(n-1)."""
    if n < 1 or m < 1:
        raise PreconditionError(f"need n, m >= 1, got n={n}, m={m}")
    seed = resolve_seed(seed)
    rng = np.random.default_rng(seed)
    hits = np.empty(samples, dtype=float)
    with tracer.start_as_current_span("randomgames.stable_first_choice_probability") as span:
        span.set_attribute("n", n)
        span.set_attribute("m", m)
        span.set_attribute("samples", samples)
        span.set_attribute("seed", seed)
        for start in range(0, samples, _CHUNK):
            size = min(_CHUNK, samples - start)
            hits[start:start + size] = _first_choices_stable(rng.random((size, n, m)), settings.tolerance)
    return estimate_report("stable_first_choice_probability", hits, seed, n=n, m=m, upper=1 / m ** (n - 1))


def _partial_sum_ratios(rng: np.random.Generator, n: int, samples: int) -> np.ndarray:
    S = np.cumsum(exponentials(rng, (samples, n)), axis=1)
    return S / S[:, -1:]


def stable_product_moment(n: int, m: int, samples: int, seed: Optional[int] = None) -> EstimatorReport:
    """E[∏ (S_i/S_n)^(m-1)] = 1/m^(n-1)."""
    seed = resolve_seed(seed)
    rng = np.random.default_rng(seed)
    with tracer.start_as_current_span("randomgames.stable_product_moment") as span:
        span.set_attribute("samples", samples)
        span.set_attribute("seed", seed)
        values = np.prod(_partial_sum_ratios(rng, n, samples) ** (m - 1), axis=1)
    return estimate_report("stable_product_moment", values, seed, n=n, m=m, exact=1 / m ** (n - 1))


def min_variant_moment(n: int, m: int, samples: int, seed: Optional[int] = None) -> EstimatorReport:
    """E[(S_{n-1}/S_n)^(m-1) ∏_{i<n} (S_i/S_n)^(m-1)] = (n-1) / ((mn-1) m^(n-2))."""
    if n < 2:
        raise PreconditionError(f"n must be at least 2, got {n}")
    seed = resolve_seed(seed)
    rng = np.random.default_rng(seed)
    with tracer.start_as_current_span("randomgames.min_variant_moment") as span:
        span.set_attribute("samples", samples)
        span.set_attribute("seed", seed)
        ratios = _partial_sum_ratios(rng, n, samples)[:, :-1]
        values = ratios[:, -1] ** (m - 1) * np.prod(ratios ** (m - 1), axis=1)
    exact = (n - 1) / ((m * n - 1) * m ** (n - 2))
    return estimate_report("min_variant_moment", values, seed, n=n, m=m, exact=exact)


def lower_bound_chain(n: int, m: int, samples: int, seed: Optional[int] = None) -> EstimatorReport:
    """E[∏_i (Σ_{j>n-i} (j-1) X_j / j)^(m-1)] / S_n^((m-1) n) >= ∏ c_i^(m-1) / m^(n-1).

    The left side is the probability bound for the all-first-choices profile
    before averaging the coefficients of each factor.
    """
    seed = resolve_seed(seed)
    rng = np.random.default_rng(seed)
    with tracer.start_as_current_span("randomgames.lower_bound_chain") as span:
        span.set_attribute("samples", samples)
        span.set_attribute("seed", seed)
        X = exponentials(rng, (samples, n))
        j = np.arange(1, n + 1)
        tails = np.cumsum((X * (j - 1) / j)[:, ::-1], axis=1)
        values = np.prod((tails / X.sum(axis=1, keepdims=True)) ** (m - 1), axis=1)
    bound = float(harmonic_constants(n).product_c ** (m - 1)) / m ** (n - 1)
    return estimate_report("lower_bound_chain", values, seed, n=n, m=m, lower=bound)
