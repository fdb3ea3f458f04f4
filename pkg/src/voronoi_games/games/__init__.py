"""Game instances, profiles and exact utilities."""

from .board import CircleBoard, PlaneBoard, make_board
from .cycling_square import build_cycling_square_instance, build_fig3_instance
from .models import GameInstance, GameVariant, Objective, Point, StrategyProfile
from .serialization import dump_instance, dumps_instance, load_instance, loads_instance
from .utilities import best_response, deviation_utilities, improves, is_pne, measures, utilities

__all__ = [
    "CircleBoard",
    "PlaneBoard",
    "make_board",
    "build_cycling_square_instance",
    "build_fig3_instance",
    "GameInstance",
    "GameVariant",
    "Objective",
    "Point",
    "StrategyProfile",
    "dump_instance",
    "dumps_instance",
    "load_instance",
    "loads_instance",
    "best_response",
    "deviation_utilities",
    "improves",
    "is_pne",
    "measures",
    "utilities",
]
