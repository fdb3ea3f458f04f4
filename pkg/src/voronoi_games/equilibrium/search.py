"""Backtracking PNE search for One-Way instances.

In the One-Way game a player's utility for a candidate depends only on the
first chosen point clockwise of it. Players are assigned one at a time;
as soon as every candidate of an assigned player has a determined
successor, that player's stability is checked and the branch is cut if it
would deviate. Single-candidate players are fixed up front and never
checked.
"""

from dataclasses import dataclass, field
from typing import Optional, Sequence

from opentelemetry import trace

from voronoi_games.config.settings import settings
from voronoi_games.errors import BudgetExceededError, PreconditionError
from voronoi_games.games import GameInstance, GameVariant, StrategyProfile
from voronoi_games.games.utilities import improves
from voronoi_games.geometry import Number, clockwise_distance

tracer = trace.get_tracer(__name__)

_UNKNOWN = object()


@dataclass
class SearchResult:
    profiles: list[StrategyProfile] = field(default_factory=list)
    nodes: int = 0
    complete: bool = True

    @property
    def found(self) -> bool:
        return bool(self.profiles)


class _OneWaySearch:
    def __init__(self, instance: GameInstance, order: Sequence[int], budget: int, first_only: bool):
        self.instance = instance
        self.order = list(order)
        self.budget = budget
        self.first_only = first_only
        self.sign = instance.objective.sign
        self.points = sorted(
            (p, k, i) for k, cands in enumerate(instance.candidates) for i, p in enumerate(cands)
        )
        self.position = {(k, i): pos for pos, (_, k, i) in enumerate(self.points)}
        self.choice: list[Optional[int]] = [0 if len(c) == 1 else None for c in instance.candidates]
        self.checked = [False] * instance.n
        self.result = SearchResult()

    def successor(self, k: int, i: int):
        """First chosen point clockwise of candidate (k, i), ``_UNKNOWN`` if undetermined."""
        total = len(self.points)
        start = self.position[(k, i)]
        for step in range(1, total):
            x, owner, idx = self.points[(start + step) % total]
            if owner == k:
                continue
            c = self.choice[owner]
            if c is None:
                return _UNKNOWN
            if c == idx:
                return x
        return None

    def utility(self, k: int, i: int, succ) -> Number:
        if succ is None:
            return self.sign * 1
        return self.sign * clockwise_distance(self.instance.candidates[k][i], succ)

    def stable_if_resolvable(self, k: int) -> Optional[bool]:
        values = []
        for i in range(len(self.instance.candidates[k])):
            succ = self.successor(k, i)
            if succ is _UNKNOWN:
                return None
            values.append(self.utility(k, i, succ))
        current = values[self.choice[k]]
        return not any(improves(self.instance, v, current) for v in values)

    def recheck(self) -> tuple[bool, list[int]]:
        newly = []
        for k in self.order:
            if self.choice[k] is None or self.checked[k]:
                continue
            verdict = self.stable_if_resolvable(k)
            if verdict is None:
                continue
            if not verdict:
                for j in newly:
                    self.checked[j] = False
                return False, []
            self.checked[k] = True
            newly.append(k)
        return True, newly

    def run(self, depth: int = 0) -> bool:
        if depth == len(self.order):
            self.result.profiles.append(tuple(self.choice))
            return self.first_only
        k = self.order[depth]
        for i in range(len(self.instance.candidates[k])):
            self.result.nodes += 1
            if self.result.nodes > self.budget:
                raise BudgetExceededError("PNE search", self.result.nodes, self.budget)
            self.choice[k] = i
            ok, newly = self.recheck()
            if ok and self.run(depth + 1):
                return True
            for j in newly:
                self.checked[j] = False
        self.choice[k] = None
        return False


def find_pne_backtracking(
    instance: GameInstance,
    budget: Optional[int] = None,
    first_only: bool = True,
    order: Optional[Sequence[int]] = None,
) -> SearchResult:
    """Pure Nash equilibria of a One-Way instance by pruned backtracking.

    ``order`` lists the multi-candidate players in assignment order; the
    default is index order. With ``first_only`` the search stops at the
    first equilibrium.
    """
    if instance.variant is not GameVariant.ONE_WAY_1D:
        raise PreconditionError("backtracking search supports the One-Way 1-D variant only")
    limit = settings.search_budget if budget is None else budget
    movers = [k for k in range(instance.n) if len(instance.candidates[k]) > 1]
    if order is None:
        order = movers
    elif sorted(order) != movers:
        raise PreconditionError("order must list every multi-candidate player exactly once")

    search = _OneWaySearch(instance, order, limit, first_only)
    with tracer.start_as_current_span("equilibrium.find_pne_backtracking") as span:
        search.run()
        span.set_attribute("nodes", search.result.nodes)
        span.set_attribute("found", len(search.result.profiles))
    return search.result
