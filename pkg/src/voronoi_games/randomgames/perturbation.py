"""Shifting row weight onto a dominated column never raises E[Π(AX)].

For an n×m nonnegative matrix A and X = (X_1..X_m) iid Exp(1), Π(AX) is the
product of the entries of AX. The perturbation B moves ``eps`` of row 0 from
column t to column s, where column s is entrywise at most column t.
"""

import itertools
import math
from collections import Counter
from typing import Optional, Sequence

import numpy as np
from opentelemetry import trace

from voronoi_games.config.settings import settings
from voronoi_games.errors import BudgetExceededError, PreconditionError
from voronoi_games.geometry import Number
from voronoi_games.randomgames.reports import EstimatorReport, estimate_report, resolve_seed
from voronoi_games.randomgames.spacings import exponentials

tracer = trace.get_tracer(__name__)

Matrix = Sequence[Sequence[Number]]


def _shape(A: Matrix) -> tuple[int, int]:
    rows = len(A)
    cols = len(A[0]) if rows else 0
    if rows == 0 or cols == 0 or any(len(row) != cols for row in A):
        raise PreconditionError("matrix must be non-empty and rectangular")
    return rows, cols


def check_perturbation(A: Matrix, s: int, t: int, eps: Number) -> None:
    rows, cols = _shape(A)
    if not (0 <= s < cols and 0 <= t < cols) or s == t:
        raise PreconditionError(f"columns s={s}, t={t} must be distinct indices below {cols}")
    if any(value < 0 for row in A for value in row):
        raise PreconditionError("matrix entries must be nonnegative")
    if any(row[s] > row[t] for row in A):
        raise PreconditionError(f"column {s} is not entrywise at most column {t}")
    if not eps > 0:
        raise PreconditionError(f"eps must be positive, got {eps}")
    if A[0][t] - eps < 0:
        raise PreconditionError(f"eps={eps} exceeds a[0][{t}]={A[0][t]}")


def perturb(A: Matrix, s: int, t: int, eps: Number) -> list[list[Number]]:
    check_perturbation(A, s, t, eps)
    B = [list(row) for row in A]
    B[0][s] += eps
    B[0][t] -= eps
    return B


def exact_product_moment(A: Matrix, budget: Optional[int] = None) -> Number:
    """E[Π(AX)] = Σ_f ∏_i a_{i f(i)} ∏_j σ_f(j)! over all f: rows → columns.

    σ_f(j) counts the rows mapped to column j (E[X^k] = k!). Exact on
    rational entries.
    """
    rows, cols = _shape(A)
    budget = settings.oracle_budget if budget is None else budget
    if cols**rows > budget:
        raise BudgetExceededError("exact product moment", cols**rows, budget)
    total: Number = 0
    for f in itertools.product(range(cols), repeat=rows):
        term = math.prod(A[i][j] for i, j in enumerate(f))
        if term == 0:
            continue
        for count in Counter(f).values():
            term *= math.factorial(count)
        total += term
    return total


def perturbation_inequality_mc(
    A: Matrix, s: int, t: int, eps: Number, samples: int, seed: Optional[int] = None
) -> EstimatorReport:
    """Paired estimate of E[Π(AX)] - E[Π(BX)] on common draws; expected >= 0."""
    B = perturb(A, s, t, eps)
    seed = resolve_seed(seed)
    rng = np.random.default_rng(seed)
    a = np.asarray(A, dtype=float)
    b = np.asarray(B, dtype=float)
    with tracer.start_as_current_span("randomgames.perturbation_inequality_mc") as span:
        span.set_attribute("rows", a.shape[0])
        span.set_attribute("cols", a.shape[1])
        span.set_attribute("samples", samples)
        span.set_attribute("seed", seed)
        X = exponentials(rng, (samples, a.shape[1]))
        diff = np.prod(X @ a.T, axis=1) - np.prod(X @ b.T, axis=1)
        try:
            exact = float(exact_product_moment(A) - exact_product_moment(B))
        except BudgetExceededError:
            exact = None
    return estimate_report("perturbation_inequality", diff, seed, n=a.shape[0], m=a.shape[1], exact=exact, lower=0.0)


def random_dominated_matrix(
    rows: int, cols: int, rng: np.random.Generator
) -> tuple[list[list[float]], int, int, float]:
    """A random nonnegative matrix with column s dominated by column t, and an eps."""
    if cols < 2:
        raise PreconditionError("need at least two columns")
    A = rng.random((rows, cols))
    s, t = (int(c) for c in rng.choice(cols, size=2, replace=False))
    A[:, t] = A[:, s] + rng.random(rows)
    eps = float(A[0, t] * rng.uniform(0.05, 1.0))
    return A.tolist(), s, t, eps
