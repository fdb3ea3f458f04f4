"""Harmonic-number constants behind the lower bound on equilibrium counts.

c_i = (1/i) Σ_{j=n-i+1..n} (j-1)/j = 1 + (H_{n-i} - H_n)/i, with
c_1 + ... + c_n = n - H_n^(2) and ∏ c_i >= exp(-H_n^(2) / (1 - H_n/n)).
The product tends to about 0.19 but is smaller for small n (1/8 at n = 2).
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from opentelemetry import trace

from voronoi_games.errors import PreconditionError
from voronoi_games.games import Objective

tracer = trace.get_tracer(__name__)

# Relative slack for the float comparison of the product bound
_LOG_SLACK = 1e-9


@dataclass(frozen=True)
class HarmonicConstants:
    n: int
    harmonic: tuple[Fraction, ...]
    harmonic2: Fraction
    c: tuple[Fraction, ...]

    @property
    def h_n(self) -> Fraction:
        return self.harmonic[self.n]

    @property
    def sum_c(self) -> Fraction:
        return sum(self.c, Fraction(0))

    @property
    def product_c(self) -> Fraction:
        return math.prod(self.c, start=Fraction(1))

    def identity_holds(self) -> bool:
        return self.sum_c == self.n - self.harmonic2

    def product_bound(self) -> float:
        if self.n < 2:
            raise PreconditionError("the product bound needs n >= 2")
        return math.exp(-float(self.harmonic2) / (1 - float(self.h_n) / self.n))

    def product_bound_holds(self) -> bool:
        return float(self.product_c) >= self.product_bound() * (1 - _LOG_SLACK)


def harmonic_constants(n: int) -> HarmonicConstants:
    """Exact rational H_0..H_n, H_n^(2) and c_1..c_n."""
    if n < 1:
        raise PreconditionError(f"n must be at least 1, got {n}")
    harmonic = [Fraction(0)]
    for i in range(1, n + 1):
        harmonic.append(harmonic[-1] + Fraction(1, i))
    harmonic2 = sum((Fraction(1, i * i) for i in range(1, n + 1)), Fraction(0))
    c = tuple(1 + (harmonic[n - i] - harmonic[n]) / i for i in range(1, n + 1))
    return HarmonicConstants(n, tuple(harmonic), harmonic2, c)


def first_identity_failure(
    n_max: int, cross_check_up_to: int = 60, spot_checks: Sequence[int] = (100, 250, 500)
) -> Optional[int]:
    """Smallest n <= n_max with Σ c_i != n - H_n^(2), or None.

    Σ c_i = n + T_n - H_n² where T_n = Σ_i H_{n-i}/i, so the identity reads
    T_n - H_n² + H_n^(2) = 0. T obeys T_n = T_{n-1} + 2 H_{n-1}/n. Every term
    is kept as an integer scaled by L = lcm(1..n_max) (L² for the quadratic
    ones), which makes the test an exact integer equality.

    The recurrence for T is the identity restated, so the scaled pass only
    confirms the derivation and the integer bookkeeping. The independent
    evidence is the direct rational sum of c_i, taken for every
    n <= cross_check_up_to and at each of ``spot_checks`` up to n_max.
    """
    if n_max < 1:
        return None
    with tracer.start_as_current_span("randomgames.harmonic_identity") as span:
        span.set_attribute("n_max", n_max)
        scale = math.lcm(*range(1, n_max + 1))
        h = 0  # H_{n-1}·L
        h2 = 0  # H_n^(2)·L²
        t = 0  # T_n·L²
        for n in range(1, n_max + 1):
            unit = scale // n
            t += 2 * h * unit
            h += unit
            h2 += unit * unit
            if t - h * h + h2 != 0:
                span.set_attribute("failure", n)
                return n
        direct = sorted(set(range(1, min(n_max, cross_check_up_to) + 1)) | {n for n in spot_checks if n <= n_max})
        for n in direct:
            if not harmonic_constants(n).identity_holds():
                span.set_attribute("failure", n)
                return n
    return None


def harmonic_identity_holds_through(n_max: int, cross_check_up_to: int = 60) -> bool:
    return first_identity_failure(n_max, cross_check_up_to) is None


def log_products(n_max: int) -> np.ndarray:
    """log ∏_{i<=n} c_i for n = 1..n_max in extended precision (index n-1)."""
    one = np.longdouble(1)
    harmonic = np.concatenate([[np.longdouble(0)], np.cumsum(one / np.arange(1, n_max + 1, dtype=np.longdouble))])
    out = np.empty(n_max, dtype=np.longdouble)
    for n in range(1, n_max + 1):
        i = np.arange(1, n + 1, dtype=np.longdouble)
        c = one + (harmonic[n - np.arange(1, n + 1)] - harmonic[n]) / i
        with np.errstate(divide="ignore"):
            out[n - 1] = np.sum(np.log(c))
    return out


def _log_bounds(n_max: int) -> np.ndarray:
    """log of exp(-H_n^(2) / (1 - H_n/n)) for n = 2..n_max."""
    k = np.arange(1, n_max + 1, dtype=np.longdouble)
    harmonic = np.cumsum(1 / k)[1:]
    harmonic2 = np.cumsum(1 / (k * k))[1:]
    # n = 1 is excluded: 1 - H_1/1 = 0
    return -harmonic2 / (1 - harmonic / k[1:])


def first_product_bound_failure(n_max: int) -> Optional[int]:
    if n_max < 2:
        return None
    with tracer.start_as_current_span("randomgames.product_bound") as span:
        span.set_attribute("n_max", n_max)
        logs = log_products(n_max)[1:]
        bounds = _log_bounds(n_max)
        failing = np.nonzero(logs < bounds - _LOG_SLACK * np.abs(bounds))[0]
        if failing.size:
            span.set_attribute("failure", int(failing[0]) + 2)
            return int(failing[0]) + 2
    return None


def product_bound_holds_through(n_max: int) -> bool:
    return first_product_bound_failure(n_max) is None


def smallest_n_reaching(threshold: float = 0.19, n_max: int = 10**4) -> Optional[int]:
    """Smallest n <= n_max with ∏ c_i >= threshold, or None."""
    logs = log_products(n_max)
    reached = np.nonzero(logs >= np.log(np.longdouble(threshold)))[0]
    return int(reached[0]) + 1 if reached.size else None


def pne_count_bounds(n: int, m: int, objective: Objective) -> tuple[Fraction, Optional[Fraction]]:
    """Bracket on the expected PNE count of a uniform random One-Way game.

    Maximisation: [m ∏ c_i^(m-1), m]. Minimisation: at least
    m(m-1) / ((mn - 1) n^(m-1)), no upper bound.
    """
    if n < 1 or m < 1:
        raise PreconditionError(f"need n, m >= 1, got n={n}, m={m}")
    if Objective(objective) is Objective.MAXIMIZE:
        return m * harmonic_constants(n).product_c ** (m - 1), Fraction(m)
    if m * n == 1:
        return Fraction(1), Fraction(1)
    return Fraction(m * (m - 1), (m * n - 1) * n ** (m - 1)), None
