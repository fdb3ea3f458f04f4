"""A 2-D instance without pure Nash equilibria.

Players 0 and 1 split the cell of (1/4, 1/2) against a cluster near the
origin: a vertical split favours player 0, a near-horizontal split gives
each about half, so player 0 wants to match player 1's row and player 1
wants to differ. Player 2 and any further players sit in an epsilon
neighbourhood of (0, 0) and only nudge the cluster's bisector.
"""

from fractions import Fraction
from typing import Union

from voronoi_games.errors import PreconditionError
from voronoi_games.games.models import GameInstance, GameVariant, Objective
from voronoi_games.geometry import PlanarPoint

MAX_EPSILON = Fraction(1, 64)


def build_cycling_square_instance(
    epsilon: Union[Fraction, int, str] = MAX_EPSILON,
    n: int = 3,
    variant: GameVariant = GameVariant.VORONOI_2D_SQUARE,
    objective: Objective = Objective.MAXIMIZE,
) -> GameInstance:
    eps = Fraction(epsilon)
    if not 0 < eps <= MAX_EPSILON:
        raise PreconditionError(f"epsilon must lie in (0, 1/64], got {eps}")
    if n < 3:
        raise PreconditionError(f"the construction needs at least 3 players, got {n}")
    if GameVariant(variant).dimension != 2:
        raise PreconditionError(f"{variant} is not a 2-D variant")

    quarter, half = Fraction(1, 4), Fraction(1, 2)
    players = [
        (PlanarPoint(quarter + eps**2, half + eps), PlanarPoint(quarter + eps**2, half - eps)),
        (PlanarPoint(quarter - eps**2, half + eps), PlanarPoint(quarter - eps**2, half - eps)),
        (PlanarPoint(Fraction(0), Fraction(0)), PlanarPoint(eps, Fraction(0))),
    ]
    extra = n - 3
    for i in range(extra):
        x = eps * (2 * i + 1) / (4 * extra)
        players.append((PlanarPoint(x, eps / 4), PlanarPoint(x, eps / 2)))
    return GameInstance(variant, objective, tuple(players))


build_fig3_instance = build_cycling_square_instance
