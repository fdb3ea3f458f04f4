"""Arc-multiset ordering that strictly decreases along improving 1-D moves.

Fewer arcs rank higher; otherwise the multisets are compared by their
largest elements, removing one copy of the common maximum at a time.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from voronoi_games.errors import PreconditionError
from voronoi_games.games import GameInstance, Objective
from voronoi_games.geometry import Number, clockwise_distance


class PotentialOrder(str, Enum):
    GREATER = "A≻B"
    LESS = "B≻A"
    EQUAL = "equal"


@dataclass(frozen=True)
class ArcMultiset:
    arcs: tuple[Number, ...]

    def __post_init__(self):
        object.__setattr__(self, "arcs", tuple(sorted(self.arcs, reverse=True)))

    @classmethod
    def of(cls, arcs: Iterable[Number]) -> "ArcMultiset":
        return cls(tuple(arcs))

    @classmethod
    def from_profile(cls, instance: GameInstance, profile: Sequence[int]) -> "ArcMultiset":
        if instance.variant.dimension != 1:
            raise PreconditionError("arc multisets are defined for 1-D variants")
        chosen = sorted(instance.chosen_points(instance.validate_profile(profile)))
        if len(chosen) == 1:
            return cls((1,))
        return cls(tuple(clockwise_distance(a, b) for a, b in zip(chosen, chosen[1:] + chosen[:1])))

    def __len__(self) -> int:
        return len(self.arcs)


def potential_compare(a: ArcMultiset, b: ArcMultiset) -> PotentialOrder:
    if len(a) != len(b):
        return PotentialOrder.GREATER if len(a) < len(b) else PotentialOrder.LESS
    for x, y in zip(a.arcs, b.arcs):
        if x != y:
            return PotentialOrder.GREATER if x > y else PotentialOrder.LESS
    return PotentialOrder.EQUAL


def improving_move_potential_ok(instance: GameInstance, before: Sequence[int], after: Sequence[int]) -> bool:
    """Whether a strictly improving unilateral move moved the potential the right way.

    Maximisers trade a large arc for smaller pieces, so the multiset drops;
    minimisers merge two arcs into a larger one, so it rises.
    """
    old = ArcMultiset.from_profile(instance, before)
    new = ArcMultiset.from_profile(instance, after)
    if instance.objective is Objective.MAXIMIZE:
        return potential_compare(old, new) is PotentialOrder.GREATER
    return potential_compare(new, old) is PotentialOrder.GREATER
