"""CSV trace of the moves made during best-response runs."""

import csv
from pathlib import Path
from typing import Optional, TextIO

from voronoi_games.equilibrium.dynamics import MoveEvent

TRACE_COLUMNS = ["attempt", "pass", "player", "old_choice", "new_choice", "old_utility", "new_utility"]


class DynamicsTraceWriter:
    """Use as the ``on_move`` listener of ``run_best_response``."""

    def __init__(self, out: TextIO, seed: Optional[int] = None):
        self._writer = csv.writer(out)
        self._writer.writerow([f"# voronoi-games dynamics-trace v1 seed={seed}"])
        self._writer.writerow(TRACE_COLUMNS)
        self.rows = 0

    def __call__(self, event: MoveEvent) -> None:
        self._writer.writerow([
            event.attempt,
            event.pass_number,
            event.player,
            event.old_choice,
            event.new_choice,
            event.old_utility,
            event.new_utility,
        ])
        self.rows += 1


def open_trace(path: Path, seed: Optional[int] = None) -> tuple[TextIO, DynamicsTraceWriter]:
    handle = open(path, "w", newline="", encoding="utf-8")
    return handle, DynamicsTraceWriter(handle, seed)
