"""Exact per-player utilities, unilateral deviations and best responses.

Utility is the signed measure a player's chosen point owns: positive under
``Objective.MAXIMIZE``, negated under ``Objective.MINIMIZE``. Strict
improvement is plain ``>`` on exact instances; on float instances a move
must gain more than ``settings.tolerance``.
"""

from typing import Optional, Sequence

from voronoi_games.config.settings import settings
from voronoi_games.games.board import Board, CircleBoard, make_board
from voronoi_games.games.models import GameInstance, GameVariant, StrategyProfile
from voronoi_games.geometry import Number, cell_area_square, cell_area_torus, clockwise_distance


def improves(instance: GameInstance, new: Number, old: Number, tolerance: Optional[float] = None) -> bool:
    if instance.exact:
        return new > old
    tol = settings.tolerance if tolerance is None else tolerance
    return new > old + tol


def _circle_measures(instance: GameInstance, profile: StrategyProfile) -> list[Number]:
    chosen = instance.chosen_points(profile)
    n = len(chosen)
    if n == 1:
        return [1]
    order = sorted(range(n), key=lambda k: chosen[k])
    measures: list[Number] = [0] * n
    for rank, k in enumerate(order):
        succ = chosen[order[(rank + 1) % n]]
        pred = chosen[order[rank - 1]]
        if instance.variant is GameVariant.ONE_WAY_1D:
            measures[k] = clockwise_distance(chosen[k], succ)
        elif n == 2:
            measures[k] = CircleBoard(instance.variant, [succ]).measure(chosen[k])
        else:
            measures[k] = clockwise_distance(pred, succ) / 2
    return measures


def measures(instance: GameInstance, profile: Sequence[int]) -> list[Number]:
    """Unsigned measure owned by each player's chosen point."""
    profile = instance.validate_profile(profile)
    if instance.variant.dimension == 1:
        return _circle_measures(instance, profile)
    chosen = instance.chosen_points(profile)
    area = cell_area_torus if instance.variant is GameVariant.VORONOI_2D_TORUS else cell_area_square
    return [area(p, chosen[:k] + chosen[k + 1:]) for k, p in enumerate(chosen)]


def utilities(instance: GameInstance, profile: Sequence[int]) -> tuple[Number, ...]:
    sign = instance.objective.sign
    return tuple(sign * value for value in measures(instance, profile))


def board_without(instance: GameInstance, profile: StrategyProfile, k: int) -> Board:
    chosen = instance.chosen_points(profile)
    return make_board(instance, chosen[:k] + chosen[k + 1:])


def deviation_utilities(instance: GameInstance, profile: Sequence[int], k: int) -> list[Number]:
    """Utility of each of player k's candidates with every other choice fixed."""
    profile = instance.validate_profile(profile)
    board = board_without(instance, profile, k)
    sign = instance.objective.sign
    return [sign * board.measure(p) for p in instance.candidates[k]]


def choose_best(instance: GameInstance, values: Sequence[Number], current: int) -> int:
    """Lowest-index maximiser of ``values``, or ``current`` without strict improvement."""
    best = current
    for i, value in enumerate(values):
        if improves(instance, value, values[best]):
            best = i
    if best == current:
        return current
    top = values[best]
    # Ties among improving candidates go to the lowest index
    for i, value in enumerate(values):
        if not improves(instance, top, value):
            return i
    return best


def best_response(instance: GameInstance, profile: Sequence[int], k: int) -> int:
    profile = instance.validate_profile(profile)
    return choose_best(instance, deviation_utilities(instance, profile, k), profile[k])


def is_pne(instance: GameInstance, profile: Sequence[int]) -> bool:
    profile = instance.validate_profile(profile)
    for k in range(instance.n):
        if len(instance.candidates[k]) == 1:
            continue
        values = deviation_utilities(instance, profile, k)
        current = values[profile[k]]
        if any(improves(instance, v, current) for v in values):
            return False
    return True
