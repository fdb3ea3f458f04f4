"""Spacings of uniform points on the circle and their exponential representation.

With X_1..X_n iid Exp(1) and S_i = X_1 + ... + X_i, the sorted arc lengths
A_1 <= ... <= A_n cut by n uniform points satisfy jointly

    A_i ~ (X_n/n + X_{n-1}/(n-1) + ... + X_{n-i+1}/(n-i+1)) / S_n

The index orientation is fixed so that A_1 is the smallest spacing; the
reversed orientation has the same law.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from opentelemetry import trace
from scipy import stats

from voronoi_games.errors import PreconditionError
from voronoi_games.randomgames.reports import EstimatorReport, estimate_report, resolve_seed

tracer = trace.get_tracer(__name__)


class SpacingRoute(str, Enum):
    SORT_UNIFORMS = "sort_uniforms"
    WEIGHTED_EXPONENTIALS = "weighted_exponentials"


@dataclass(frozen=True)
class SpacingSample:
    X: np.ndarray
    S: np.ndarray
    A: np.ndarray


def exponentials(rng: np.random.Generator, size) -> np.ndarray:
    """Unit-mean exponentials by inverse transform of 64-bit uniforms."""
    return -np.log1p(-rng.random(size))


def _check_n(n: int) -> None:
    if n < 1:
        raise PreconditionError(f"n must be at least 1, got {n}")


def _weighted(X: np.ndarray) -> np.ndarray:
    n = X.shape[-1]
    weighted = X / np.arange(1, n + 1)
    tails = np.cumsum(weighted[..., ::-1], axis=-1)
    return tails / X.sum(axis=-1, keepdims=True)


def _circular_gaps(U: np.ndarray) -> np.ndarray:
    ordered = np.sort(U, axis=-1)
    gaps = np.diff(ordered, axis=-1)
    wrap = 1.0 - ordered[..., -1:] + ordered[..., :1]
    return np.concatenate([gaps, wrap], axis=-1)


def sample_spacings(
    n: int,
    seed: Optional[int] = None,
    route: SpacingRoute = SpacingRoute.WEIGHTED_EXPONENTIALS,
    rng: Optional[np.random.Generator] = None,
) -> SpacingSample:
    """One draw of the ordered spacings.

    On the sort route ``X`` holds the circular gaps in circle order, so
    ``S_n == 1``.
    """
    _check_n(n)
    rng = rng if rng is not None else np.random.default_rng(seed)
    if SpacingRoute(route) is SpacingRoute.WEIGHTED_EXPONENTIALS:
        X = exponentials(rng, n)
        A = _weighted(X)
    else:
        X = _circular_gaps(rng.random(n))
        A = np.sort(X)
    return SpacingSample(X=X, S=np.cumsum(X), A=A)


def sample_spacings_batch(
    n: int,
    samples: int,
    rng: np.random.Generator,
    route: SpacingRoute = SpacingRoute.WEIGHTED_EXPONENTIALS,
) -> np.ndarray:
    """``samples × n`` matrix whose rows are independent ordered spacings."""
    _check_n(n)
    if SpacingRoute(route) is SpacingRoute.WEIGHTED_EXPONENTIALS:
        return _weighted(exponentials(rng, (samples, n)))
    return np.sort(_circular_gaps(rng.random((samples, n))), axis=-1)


def spacing_marginals_ks(n: int, samples: int, seed: Optional[int] = None) -> list[float]:
    """Two-sample KS p-value per index i, weighted route against sorted uniforms."""
    seed = resolve_seed(seed)
    weighted_rng, sorted_rng = (np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(2))
    with tracer.start_as_current_span("randomgames.spacing_marginals_ks") as span:
        span.set_attribute("n", n)
        span.set_attribute("samples", samples)
        span.set_attribute("seed", seed)
        weighted = sample_spacings_batch(n, samples, weighted_rng, SpacingRoute.WEIGHTED_EXPONENTIALS)
        direct = sample_spacings_batch(n, samples, sorted_rng, SpacingRoute.SORT_UNIFORMS)
        pvalues = [float(stats.ks_2samp(weighted[:, i], direct[:, i]).pvalue) for i in range(n)]
        span.set_attribute("min_pvalue", min(pvalues))
    return pvalues


def smallest_spacing_mean(n: int, samples: int, seed: Optional[int] = None) -> EstimatorReport:
    """E[A_1] against its exact value 1/n²."""
    seed = resolve_seed(seed)
    rng = np.random.default_rng(seed)
    with tracer.start_as_current_span("randomgames.smallest_spacing_mean") as span:
        span.set_attribute("samples", samples)
        span.set_attribute("seed", seed)
        values = sample_spacings_batch(n, samples, rng)[:, 0]
    return estimate_report("smallest_spacing_mean", values, seed, n=n, exact=1 / n**2)


def beta_moment_estimate(j: int, t: float, samples: int, seed: Optional[int] = None) -> EstimatorReport:
    """E[(S_j/S_{j+1})^t]; the ratio is Beta(j, 1), so the exact value is j/(j+t)."""
    if j < 1 or t < 0:
        raise PreconditionError(f"need j >= 1 and t >= 0, got j={j}, t={t}")
    seed = resolve_seed(seed)
    rng = np.random.default_rng(seed)
    with tracer.start_as_current_span("randomgames.beta_moment_estimate") as span:
        span.set_attribute("j", j)
        span.set_attribute("t", float(t))
        span.set_attribute("samples", samples)
        span.set_attribute("seed", seed)
        S = np.cumsum(exponentials(rng, (samples, j + 1)), axis=1)
        values = (S[:, j - 1] / S[:, j]) ** t
    return estimate_report(f"beta_moment[j={j},t={t}]", values, seed, n=j, exact=j / (j + t))


def _rising_factorial(x: int, a: int) -> int:
    return math.prod(range(x, x + a))


def _factorization_cases(n: int) -> list[tuple[int, tuple[int, ...]]]:
    ratios = n - 1
    cases = [
        (1, (1,) * ratios),
        (2, tuple(1 + (i % 2) for i in range(ratios))),
        (1, (2,) + (0,) * (ratios - 1)),
        (0, (0,) * (ratios - 1) + (3,)),
    ]
    return cases


@dataclass(frozen=True)
class IndependenceReport:
    n: int
    samples: int
    seed: int
    correlations: list[tuple[str, str, float]]
    correlation_limit: float
    factorizations: list[EstimatorReport]

    @property
    def passed(self) -> bool:
        correlated = any(abs(r) > self.correlation_limit for _, _, r in self.correlations)
        return not correlated and all(report.passed for report in self.factorizations)


def independence_check(n: int, samples: int, seed: Optional[int] = None) -> IndependenceReport:
    """S_n and the ratios S_i/S_{i+1} (1 <= i < n) are mutually independent.

    Checks every pairwise sample correlation against a Bonferroni-corrected
    normal band (each has standard error about 1/√samples under
    independence) and a few product moments against their factorised
    closed forms E[S_n^a] = n(n+1)...(n+a-1), E[(S_i/S_{i+1})^b] = i/(i+b).
    """
    seed = resolve_seed(seed)
    if n < 2:
        return IndependenceReport(n, samples, seed, [], math.inf, [])
    rng = np.random.default_rng(seed)
    with tracer.start_as_current_span("randomgames.independence_check") as span:
        span.set_attribute("n", n)
        span.set_attribute("samples", samples)
        span.set_attribute("seed", seed)
        S = np.cumsum(exponentials(rng, (samples, n)), axis=1)
        ratios = S[:, :-1] / S[:, 1:]
        columns = np.column_stack([S[:, -1], ratios])
        names = ["S_n"] + [f"S_{i}/S_{i + 1}" for i in range(1, n)]

        matrix = np.corrcoef(columns, rowvar=False)
        pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
        z = float(stats.norm.isf(0.0027 / (2 * len(pairs))))
        correlations = [(names[a], names[b], float(matrix[a, b])) for a, b in pairs]

        factorizations = []
        for a, b in _factorization_cases(n):
            exact = float(_rising_factorial(n, a))
            for i, power in enumerate(b, start=1):
                exact *= i / (i + power)
            values = S[:, -1] ** a * np.prod(ratios ** np.asarray(b), axis=1)
            factorizations.append(
                estimate_report(f"factorization[a={a},b={','.join(map(str, b))}]", values, seed, n=n, exact=exact)
            )
        report = IndependenceReport(n, samples, seed, correlations, z / math.sqrt(samples), factorizations)
        span.set_attribute("passed", report.passed)
    return report
