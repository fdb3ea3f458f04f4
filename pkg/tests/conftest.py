from fractions import Fraction as F
from pathlib import Path

import pytest

from voronoi_games.games import GameInstance, GameVariant, Objective

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def one_way_example() -> GameInstance:
    """Player 0 chooses between 0 (gap 1/4) and 1/2 (gap 3/8); the others are fixed."""
    return GameInstance(
        GameVariant.ONE_WAY_1D,
        Objective.MAXIMIZE,
        ((F(0), F(1, 2)), (F(1, 4),), (F(7, 8),)),
    )


@pytest.fixture
def three_points_circle() -> GameInstance:
    return GameInstance(
        GameVariant.VORONOI_1D,
        Objective.MAXIMIZE,
        ((F(0), F(1, 2)), (F(1, 4),), (F(3, 4),)),
    )
