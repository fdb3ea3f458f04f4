"""Myopic best-response dynamics and the multi-start search built on them.

A pass sweeps the players in index order, moving each to its best response
against the current profile. A pass without a move means the profile is a
pure Nash equilibrium. Since the sweep is deterministic, seeing the same
profile at the start of two passes proves the run can never converge.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np
from opentelemetry import trace

from voronoi_games.errors import PreconditionError
from voronoi_games.games import GameInstance, StrategyProfile, make_board
from voronoi_games.games.utilities import choose_best
from voronoi_games.geometry import Number

tracer = trace.get_tracer(__name__)


class DynamicsStatus(str, Enum):
    CONVERGED = "converged"
    GAVE_UP = "gave_up"


@dataclass(frozen=True)
class DynamicsOutcome:
    status: DynamicsStatus
    profile: StrategyProfile
    passes: int
    attempts: int = 1
    moves: int = 0
    cycle_detected: bool = False

    @property
    def converged(self) -> bool:
        return self.status is DynamicsStatus.CONVERGED


@dataclass(frozen=True)
class MoveEvent:
    attempt: int
    pass_number: int
    player: int
    old_choice: int
    new_choice: int
    old_utility: Number
    new_utility: Number


MoveListener = Callable[[MoveEvent], None]


def run_best_response(
    instance: GameInstance,
    initial: Sequence[int],
    max_passes: int,
    on_move: Optional[MoveListener] = None,
    attempt: int = 1,
    detect_cycles: bool = True,
) -> DynamicsOutcome:
    if max_passes < 1:
        raise PreconditionError(f"max_passes must be at least 1, got {max_passes}")
    profile = list(instance.validate_profile(initial))
    sign = instance.objective.sign
    board = make_board(instance, instance.chosen_points(profile))
    movers = [k for k in range(instance.n) if len(instance.candidates[k]) > 1]
    seen: set[StrategyProfile] = set()
    moves = 0

    with tracer.start_as_current_span("equilibrium.run_best_response") as span:
        span.set_attribute("players", instance.n)
        span.set_attribute("attempt", attempt)
        for pass_number in range(1, max_passes + 1):
            if detect_cycles:
                key = tuple(profile)
                if key in seen:
                    span.set_attribute("status", DynamicsStatus.GAVE_UP.value)
                    span.set_attribute("cycle_detected", True)
                    return DynamicsOutcome(
                        DynamicsStatus.GAVE_UP, key, pass_number - 1, attempt, moves, cycle_detected=True
                    )
                seen.add(key)

            changed = False
            for k in movers:
                points = instance.candidates[k]
                old = profile[k]
                board.remove(points[old])
                values = [sign * board.measure(p) for p in points]
                new = choose_best(instance, values, old)
                board.add(points[new])
                if new != old:
                    profile[k] = new
                    changed = True
                    moves += 1
                    if on_move is not None:
                        on_move(MoveEvent(attempt, pass_number, k, old, new, values[old], values[new]))

            if not changed:
                span.set_attribute("passes", pass_number)
                span.set_attribute("status", DynamicsStatus.CONVERGED.value)
                return DynamicsOutcome(DynamicsStatus.CONVERGED, tuple(profile), pass_number, attempt, moves)

        span.set_attribute("passes", max_passes)
        span.set_attribute("status", DynamicsStatus.GAVE_UP.value)
        return DynamicsOutcome(DynamicsStatus.GAVE_UP, tuple(profile), max_passes, attempt, moves)


def random_profile(instance: GameInstance, rng: np.random.Generator) -> StrategyProfile:
    return tuple(int(i) for i in rng.integers(0, np.asarray(instance.m)))


def multi_start_search(
    instance: GameInstance,
    attempts: int,
    max_passes: int,
    seed: Optional[int] = None,
    first_all_zero: bool = False,
    on_move: Optional[MoveListener] = None,
) -> DynamicsOutcome:
    """Restart best-response dynamics from uniform random profiles.

    Returns the first converged outcome, with ``attempts`` set to the
    attempt that converged, or the last ``GAVE_UP`` outcome.
    """
    if attempts < 1:
        raise PreconditionError(f"attempts must be at least 1, got {attempts}")
    rng = np.random.default_rng(seed)
    outcome: Optional[DynamicsOutcome] = None
    with tracer.start_as_current_span("equilibrium.multi_start_search") as span:
        span.set_attribute("seed", -1 if seed is None else int(seed))
        for attempt in range(1, attempts + 1):
            if attempt == 1 and first_all_zero:
                initial = (0,) * instance.n
            else:
                initial = random_profile(instance, rng)
            outcome = run_best_response(instance, initial, max_passes, on_move=on_move, attempt=attempt)
            if outcome.converged:
                break
        span.set_attribute("attempts", outcome.attempts)
        span.set_attribute("status", outcome.status.value)
    return outcome
