"""Uniform random game instances."""

from typing import Optional, Sequence, Union

import numpy as np

from voronoi_games.errors import DuplicatePointError, PreconditionError
from voronoi_games.games import GameInstance, GameVariant, Objective
from voronoi_games.geometry import PlanarPoint

SeedLike = Union[None, int, np.random.SeedSequence]


def _candidate_counts(n: int, m: Union[int, Sequence[int]]) -> list[int]:
    counts = [int(m)] * n if isinstance(m, (int, np.integer)) else [int(c) for c in m]
    if n < 1 or len(counts) != n or min(counts) < 1:
        raise PreconditionError(f"need n >= 1 players with at least one candidate each, got n={n}, m={m}")
    return counts


def random_instance(
    n: int,
    m: Union[int, Sequence[int]],
    variant: GameVariant,
    objective: Objective,
    seed: SeedLike = None,
    rng: Optional[np.random.Generator] = None,
) -> GameInstance:
    """iid uniform candidates on the circle, the unit square or the torus.

    ``m`` is either a common candidate count or one count per player.
    Float draws from a continuous distribution are distinct with
    probability 1; a collision is simply redrawn.
    """
    variant = GameVariant(variant)
    counts = _candidate_counts(n, m)
    rng = rng if rng is not None else np.random.default_rng(seed)
    while True:
        if variant.dimension == 1:
            flat = rng.random(sum(counts)).tolist()
            points = iter(flat)
        else:
            flat = rng.random((sum(counts), 2)).tolist()
            points = (PlanarPoint(x, y) for x, y in flat)
        candidates = tuple(tuple(next(points) for _ in range(c)) for c in counts)
        try:
            return GameInstance(variant, objective, candidates)
        except DuplicatePointError:
            continue
