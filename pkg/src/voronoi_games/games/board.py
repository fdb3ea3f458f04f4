"""Mutable "everyone but one player" boards for repeated deviation queries.

A board holds the chosen points of the other players and reports the
measure a new point would own among them. Dynamics keep one board per run,
removing the mover's point before querying and re-inserting the result.
"""

from bisect import bisect_left, bisect_right, insort
from fractions import Fraction
from typing import Iterable, Union

from voronoi_games.games.models import GameInstance, GameVariant, Point
from voronoi_games.geometry import Number, PlanarPoint, cell_area_square, cell_area_torus, clockwise_distance


def _one_half(x: Number) -> Number:
    return Fraction(1, 2) if isinstance(x, Fraction) else 0.5


class CircleBoard:
    def __init__(self, variant: GameVariant, positions: Iterable[Number] = ()):
        self.variant = variant
        self._sorted: list[Number] = sorted(positions)

    def __len__(self) -> int:
        return len(self._sorted)

    def add(self, x: Number) -> None:
        insort(self._sorted, x)

    def remove(self, x: Number) -> None:
        i = bisect_left(self._sorted, x)
        if i == len(self._sorted) or self._sorted[i] != x:
            raise KeyError(x)
        del self._sorted[i]

    def neighbours(self, x: Number) -> tuple[Number, Number]:
        """Nearest occupied positions counterclockwise and clockwise of ``x``."""
        i = bisect_right(self._sorted, x)
        succ = self._sorted[i % len(self._sorted)]
        pred = self._sorted[i - 1]
        return pred, succ

    def measure(self, x: Number) -> Number:
        if not self._sorted:
            return 1
        pred, succ = self.neighbours(x)
        if self.variant is GameVariant.ONE_WAY_1D:
            return clockwise_distance(x, succ)
        if len(self._sorted) == 1:
            return _one_half(x)
        # Half the gap between the neighbours: identical for every x in the gap
        return clockwise_distance(pred, succ) / 2


class PlaneBoard:
    def __init__(self, variant: GameVariant, points: Iterable[PlanarPoint] = ()):
        self.variant = variant
        self._points: list[PlanarPoint] = list(points)

    def __len__(self) -> int:
        return len(self._points)

    def add(self, x: PlanarPoint) -> None:
        self._points.append(x)

    def remove(self, x: PlanarPoint) -> None:
        self._points.remove(x)

    def measure(self, x: PlanarPoint) -> Number:
        if self.variant is GameVariant.VORONOI_2D_TORUS:
            return cell_area_torus(x, self._points)
        return cell_area_square(x, self._points)


Board = Union[CircleBoard, PlaneBoard]


def make_board(instance: GameInstance, points: Iterable[Point] = ()) -> Board:
    if instance.variant.dimension == 1:
        return CircleBoard(instance.variant, points)
    return PlaneBoard(instance.variant, points)
