"""Brute-force expected utilities: every opponent configuration, weighted."""

import itertools
from math import prod
from typing import Optional

from opentelemetry import trace

from voronoi_games.config.settings import settings
from voronoi_games.errors import BudgetExceededError
from voronoi_games.expectation.distribution import ProductDistribution
from voronoi_games.games import GameInstance, make_board
from voronoi_games.geometry import Number

tracer = trace.get_tracer(__name__)


def oracle_expected_measure(
    instance: GameInstance, dist: ProductDistribution, k: int, budget: Optional[int] = None
) -> list[Number]:
    dist.check_matches(instance)
    limit = settings.oracle_budget if budget is None else budget
    opponents = [j for j in range(instance.n) if j != k]
    configurations = prod(instance.m[j] for j in opponents)
    if configurations > limit:
        raise BudgetExceededError("expected-utility oracle", configurations, limit)

    totals: list[Number] = [0] * len(instance.candidates[k])
    with tracer.start_as_current_span("expectation.oracle_expected_utility") as span:
        span.set_attribute("configurations", configurations)
        for choice in itertools.product(*(range(instance.m[j]) for j in opponents)):
            weight = prod(dist.s(j, c) for j, c in zip(opponents, choice))
            if weight == 0:
                continue
            board = make_board(instance, [instance.candidates[j][c] for j, c in zip(opponents, choice)])
            for i, p in enumerate(instance.candidates[k]):
                totals[i] += weight * board.measure(p)
    return totals


def oracle_expected_utility(
    instance: GameInstance, dist: ProductDistribution, k: int, budget: Optional[int] = None
) -> list[Number]:
    sign = instance.objective.sign
    return [sign * v for v in oracle_expected_measure(instance, dist, k, budget)]
