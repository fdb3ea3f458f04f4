"""Game instances and strategy profiles."""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import prod
from typing import Sequence, Union

from voronoi_games.errors import DuplicatePointError, InvalidInstanceError
from voronoi_games.geometry import Number, PlanarPoint

Point = Union[Number, PlanarPoint]
StrategyProfile = tuple[int, ...]


class GameVariant(str, Enum):
    ONE_WAY_1D = "one_way_1d"
    VORONOI_1D = "voronoi_1d"
    VORONOI_2D_SQUARE = "voronoi_2d_square"
    VORONOI_2D_TORUS = "voronoi_2d_torus"

    @property
    def dimension(self) -> int:
        return 1 if self in (GameVariant.ONE_WAY_1D, GameVariant.VORONOI_1D) else 2


class Objective(str, Enum):
    MAXIMIZE = "max"
    MINIMIZE = "min"

    @property
    def sign(self) -> int:
        return 1 if self is Objective.MAXIMIZE else -1


def _coerce(value) -> Number:
    if isinstance(value, bool):
        raise InvalidInstanceError(f"not a coordinate: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, (Fraction, float)):
        return value
    raise InvalidInstanceError(f"not a coordinate: {value!r}")


@dataclass(frozen=True)
class GameInstance:
    """n players, player k holding m_k private candidate points.

    1-D points are positions on the unit circle in [0, 1); 2-D points are
    ``PlanarPoint`` values in the unit square. All candidates across all
    players must be pairwise distinct (modulo 1 on the torus).
    """

    variant: GameVariant
    objective: Objective
    candidates: tuple[tuple[Point, ...], ...]

    def __post_init__(self):
        variant = GameVariant(self.variant)
        object.__setattr__(self, "variant", variant)
        object.__setattr__(self, "objective", Objective(self.objective))
        if len(self.candidates) < 1:
            raise InvalidInstanceError("an instance needs at least one player")

        players = []
        for k, points in enumerate(self.candidates):
            if len(points) < 1:
                raise InvalidInstanceError(f"player {k} has no candidate points")
            if variant.dimension == 1:
                normalized = tuple(self._check_position(k, p) for p in points)
            else:
                normalized = tuple(self._check_planar(k, p) for p in points)
            players.append(normalized)
        object.__setattr__(self, "candidates", tuple(players))
        self._check_distinct()

    def _check_position(self, k: int, value) -> Number:
        v = _coerce(value)
        if not 0 <= v < 1:
            raise InvalidInstanceError(f"player {k}: position {value} outside [0, 1)")
        return v

    def _check_planar(self, k: int, value) -> PlanarPoint:
        try:
            x, y = value
        except (TypeError, ValueError):
            raise InvalidInstanceError(f"player {k}: {value!r} is not a planar point")
        point = PlanarPoint(_coerce(x), _coerce(y))
        if not (0 <= point.x <= 1 and 0 <= point.y <= 1):
            raise InvalidInstanceError(f"player {k}: point {tuple(point)} outside the unit square")
        return point

    def _check_distinct(self) -> None:
        seen: dict = {}
        torus = self.variant is GameVariant.VORONOI_2D_TORUS
        for k, points in enumerate(self.candidates):
            for i, p in enumerate(points):
                key = PlanarPoint(p.x % 1, p.y % 1) if torus else p
                if key in seen:
                    raise DuplicatePointError(
                        f"point {p} of player {k} (index {i}) duplicates player {seen[key][0]} "
                        f"index {seen[key][1]}"
                    )
                seen[key] = (k, i)

    @property
    def n(self) -> int:
        return len(self.candidates)

    @property
    def m(self) -> tuple[int, ...]:
        return tuple(len(points) for points in self.candidates)

    @property
    def profile_count(self) -> int:
        return prod(self.m)

    @property
    def exact(self) -> bool:
        def is_fraction(p):
            if isinstance(p, PlanarPoint):
                return isinstance(p.x, Fraction) and isinstance(p.y, Fraction)
            return isinstance(p, Fraction)

        return all(is_fraction(p) for points in self.candidates for p in points)

    def point(self, k: int, i: int) -> Point:
        return self.candidates[k][i]

    def chosen_points(self, profile: Sequence[int]) -> list[Point]:
        return [self.candidates[k][i] for k, i in enumerate(profile)]

    def validate_profile(self, profile: Sequence[int]) -> StrategyProfile:
        profile = tuple(int(i) for i in profile)
        if len(profile) != self.n:
            raise InvalidInstanceError(f"profile has {len(profile)} entries, instance has {self.n} players")
        for k, i in enumerate(profile):
            if not 0 <= i < len(self.candidates[k]):
                raise InvalidInstanceError(f"player {k}: choice {i} out of range [0, {len(self.candidates[k])})")
        return profile
