"""Services backing the command line: game files and experiment grids."""

from .experiment_service import ExperimentConfig, ExperimentService
from .game_service import GameService

__all__ = ["ExperimentConfig", "ExperimentService", "GameService"]
