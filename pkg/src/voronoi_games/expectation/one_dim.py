"""Expected 1-D utilities under a product distribution.

Opponent candidates are swept in order of distance from the focal point.
``remaining[j]`` is the probability mass of player j not yet passed and
``P`` the product of all ``remaining``, i.e. the probability that nothing
has been chosen so far. A candidate q of player j is the first chosen point
with probability ``s(q) * P / remaining[j]``. Once every positive-mass
candidate of some player has been passed, ``P`` is zero and the sweep stops.
"""

from fractions import Fraction
from typing import Callable

from opentelemetry import trace

from voronoi_games.errors import PreconditionError
from voronoi_games.expectation.distribution import ProductDistribution
from voronoi_games.games import GameInstance, GameVariant
from voronoi_games.geometry import Number, clockwise_distance, counterclockwise_distance

tracer = trace.get_tracer(__name__)


def _expected_gap(
    instance: GameInstance,
    dist: ProductDistribution,
    k: int,
    i: int,
    distance: Callable[[Number, Number], Number],
    early_stop: bool,
) -> Number:
    if instance.variant.dimension != 1:
        raise PreconditionError(f"{instance.variant.value} is not a 1-D variant")
    dist.check_matches(instance)
    p = instance.candidates[k][i]
    one = Fraction(1) if isinstance(p, Fraction) else 1.0

    sweep = []
    unpassed = {}
    remaining = {}
    for j, points in enumerate(instance.candidates):
        if j == k:
            continue
        positive = 0
        for idx, q in enumerate(points):
            s = dist.s(j, idx)
            if s > 0:
                sweep.append((distance(p, q), j, s))
                positive += 1
        unpassed[j] = positive
        remaining[j] = one
    if not sweep:
        return one
    sweep.sort(key=lambda entry: entry[0])

    expected = 0 * one
    P = one
    for length, j, s in sweep:
        if P == 0 and early_stop:
            break
        unpassed[j] -= 1
        if unpassed[j] == 0:
            # Last live candidate of j: it is certainly chosen if nothing earlier was
            expected += P * length
            P = 0 * one
            remaining[j] = 0 * one
        else:
            if P != 0 and remaining[j] > 0:
                expected += s * (P / remaining[j]) * length
                P = P / remaining[j] * (remaining[j] - s)
            remaining[j] = remaining[j] - s
    return expected


def expected_clockwise_gap(
    instance: GameInstance, dist: ProductDistribution, k: int, i: int, early_stop: bool = True
) -> Number:
    """E[distance from candidate i of player k to the first chosen point clockwise]."""
    return _expected_gap(instance, dist, k, i, clockwise_distance, early_stop)


def expected_counterclockwise_gap(
    instance: GameInstance, dist: ProductDistribution, k: int, i: int, early_stop: bool = True
) -> Number:
    return _expected_gap(instance, dist, k, i, counterclockwise_distance, early_stop)


def expected_measure_1d(
    instance: GameInstance, dist: ProductDistribution, k: int, early_stop: bool = True
) -> list[Number]:
    with tracer.start_as_current_span("expectation.expected_utility_1d") as span:
        span.set_attribute("player", k)
        values = []
        for i in range(len(instance.candidates[k])):
            forward = expected_clockwise_gap(instance, dist, k, i, early_stop)
            if instance.variant is GameVariant.ONE_WAY_1D:
                values.append(forward)
            else:
                backward = expected_counterclockwise_gap(instance, dist, k, i, early_stop)
                values.append((forward + backward) / 2)
    return values


def expected_utility_1d(
    instance: GameInstance, dist: ProductDistribution, k: int, early_stop: bool = True
) -> list[Number]:
    """Conditional expected utility of each candidate of player k."""
    sign = instance.objective.sign
    return [sign * v for v in expected_measure_1d(instance, dist, k, early_stop)]
