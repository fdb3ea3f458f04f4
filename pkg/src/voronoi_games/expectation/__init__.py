"""Expected utilities under product distributions."""

from voronoi_games.expectation.distribution import (
    ProductDistribution,
    dump_distribution,
    dumps_distribution,
    load_distribution,
    loads_distribution,
)
from voronoi_games.expectation.one_dim import (
    expected_clockwise_gap,
    expected_counterclockwise_gap,
    expected_measure_1d,
    expected_utility_1d,
)
from voronoi_games.expectation.oracle import oracle_expected_measure, oracle_expected_utility
from voronoi_games.expectation.two_dim import (
    SectorDecomposition,
    expected_di_dj,
    expected_measure_2d,
    expected_utility_2d,
    sector_decomposition,
)
from voronoi_games.games import GameInstance
from voronoi_games.geometry import Number


def expected_utilities(instance: GameInstance, dist: ProductDistribution, k: int) -> list[Number]:
    if instance.variant.dimension == 1:
        return expected_utility_1d(instance, dist, k)
    return expected_utility_2d(instance, dist, k)


def total_expected_measure(instance: GameInstance, dist: ProductDistribution) -> Number:
    """Σ over players and candidates of s(p) · E[measure | p chosen]; equals 1."""
    total = 0
    for k in range(instance.n):
        if instance.variant.dimension == 1:
            values = expected_measure_1d(instance, dist, k)
        else:
            values = expected_measure_2d(instance, dist, k)
        total += sum(dist.s(k, i) * v for i, v in enumerate(values))
    return total


__all__ = [
    "ProductDistribution",
    "dump_distribution",
    "dumps_distribution",
    "load_distribution",
    "loads_distribution",
    "expected_clockwise_gap",
    "expected_counterclockwise_gap",
    "expected_measure_1d",
    "expected_utility_1d",
    "oracle_expected_measure",
    "oracle_expected_utility",
    "SectorDecomposition",
    "expected_di_dj",
    "expected_measure_2d",
    "expected_utility_2d",
    "sector_decomposition",
    "expected_utilities",
    "total_expected_measure",
]
