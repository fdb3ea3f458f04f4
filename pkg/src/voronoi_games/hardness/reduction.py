"""Monotone 1-in-3 SAT → One-Way 1-D maximisation game."""

import json
from collections import Counter
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

from opentelemetry import trace
from pydantic import BaseModel

from voronoi_games.errors import InvalidInstanceError, PreconditionError
from voronoi_games.games import GameInstance, GameVariant, Objective
from voronoi_games.games.serialization import format_number
from voronoi_games.geometry import clockwise_distance
from voronoi_games.hardness.formula import Monotone1in3Formula
from voronoi_games.hardness.layout import (
    EPSILON_LIMIT,
    GadgetRegion,
    VariableRegion,
    check_epsilon,
    region_length,
)

tracer = trace.get_tracer(__name__)


class PlayerRole(str, Enum):
    BOUNDARY = "boundary"
    CLAUSE = "clause"
    SHADOW_CLAUSE = "shadow_clause"
    WRAP = "wrap"
    UEG_X = "ueg_x"
    UEG_Y = "ueg_y"
    UEG_Z = "ueg_z"
    GENERIC = "generic"


@dataclass(frozen=True)
class RoleTaggedInstance:
    """A One-Way maximisation instance with a role per player.

    ``d`` and ``eps`` are in the instance's own (unit-circumference) units.
    ``candidate_variables[k][i]`` is the variable whose region holds
    candidate i of player k, or None. ``clause_of`` gives the 0-based clause
    a clause, shadow or gadget player belongs to; ``variable_of`` the
    variable of a wrap player.
    """

    instance: GameInstance
    roles: tuple[PlayerRole, ...]
    labels: tuple[str, ...]
    candidate_variables: tuple[tuple[Optional[int], ...], ...]
    clause_of: tuple[Optional[int], ...]
    variable_of: tuple[Optional[int], ...]
    d: Fraction
    eps: Fraction
    formula: Optional[Monotone1in3Formula] = None

    def __post_init__(self):
        n = self.instance.n
        if not (len(self.roles) == len(self.labels) == len(self.clause_of) == len(self.variable_of) == n):
            raise InvalidInstanceError("role annotations must cover every player")
        if tuple(len(c) for c in self.candidate_variables) != self.instance.m:
            raise InvalidInstanceError("candidate variables must cover every candidate")

    @classmethod
    def untagged(cls, instance: GameInstance, d: Fraction, eps: Fraction) -> "RoleTaggedInstance":
        n = instance.n
        return cls(
            instance=instance,
            roles=tuple(PlayerRole.BOUNDARY if m == 1 else PlayerRole.GENERIC for m in instance.m),
            labels=tuple(f"p{k}" for k in range(n)),
            candidate_variables=tuple((None,) * m for m in instance.m),
            clause_of=(None,) * n,
            variable_of=(None,) * n,
            d=Fraction(d),
            eps=Fraction(eps),
        )

    def players(self, role: PlayerRole) -> list[int]:
        return [k for k, r in enumerate(self.roles) if r is role]

    @property
    def role_census(self) -> dict[str, int]:
        return dict(Counter(role.value for role in self.roles))

    @property
    def compact_player_count(self) -> Optional[int]:
        if self.formula is None:
            return None
        return 2 * self.formula.k + 6 * self.formula.l


class RoleDocument(BaseModel):
    format: str = "voronoi-games/roles"
    version: int = 1
    roles: list[PlayerRole]
    labels: list[str]
    candidate_variables: list[list[Optional[int]]]
    clause_of: list[Optional[int]]
    variable_of: list[Optional[int]]
    d: str
    eps: str
    compact_player_count: Optional[int] = None
    player_count: int


def role_document(tagged: RoleTaggedInstance) -> RoleDocument:
    return RoleDocument(
        roles=list(tagged.roles),
        labels=list(tagged.labels),
        candidate_variables=[list(c) for c in tagged.candidate_variables],
        clause_of=list(tagged.clause_of),
        variable_of=list(tagged.variable_of),
        d=format_number(tagged.d),
        eps=format_number(tagged.eps),
        compact_player_count=tagged.compact_player_count,
        player_count=tagged.instance.n,
    )


def dump_roles(tagged: RoleTaggedInstance, path: Path) -> None:
    Path(path).write_text(json.dumps(role_document(tagged).model_dump(mode="json"), indent=2) + "\n", encoding="utf-8")


class _Builder:
    """Accumulates players in unscaled coordinates."""

    def __init__(self):
        self.points: list[list[Fraction]] = []
        self.roles: list[PlayerRole] = []
        self.labels: list[str] = []
        self.variables: list[list[Optional[int]]] = []
        self.clause_of: list[Optional[int]] = []
        self.variable_of: list[Optional[int]] = []

    def add(self, role, label, points, variables=None, clause=None, variable=None) -> int:
        self.points.append(list(points))
        self.roles.append(role)
        self.labels.append(label)
        self.variables.append(list(variables) if variables is not None else [None] * len(points))
        self.clause_of.append(clause)
        self.variable_of.append(variable)
        return len(self.points) - 1

    def add_gadget(self, region: GadgetRegion, clause: Optional[int], suffix: str) -> None:
        self.add(PlayerRole.UEG_X, f"x{suffix}", region.x_points, clause=clause)
        self.add(PlayerRole.UEG_Y, f"y{suffix}", region.y_points, clause=clause)
        self.add(PlayerRole.UEG_Z, f"z{suffix}", [region.z_point], clause=clause)

    def build(self, circumference: Fraction, d: Fraction, eps: Fraction, formula=None) -> RoleTaggedInstance:
        candidates = tuple(tuple(p / circumference for p in pts) for pts in self.points)
        instance = GameInstance(GameVariant.ONE_WAY_1D, Objective.MAXIMIZE, candidates)
        return RoleTaggedInstance(
            instance=instance,
            roles=tuple(self.roles),
            labels=tuple(self.labels),
            candidate_variables=tuple(tuple(v) for v in self.variables),
            clause_of=tuple(self.clause_of),
            variable_of=tuple(self.variable_of),
            d=d / circumference,
            eps=eps / circumference,
            formula=formula,
        )


def max_sub_d_gap(instance: GameInstance, r: int, d: Fraction) -> Optional[Fraction]:
    """Largest utility below d that player r can ever get, or None."""
    others = [q for k, pts in enumerate(instance.candidates) if k != r for q in pts]
    gaps = [clockwise_distance(p, q) for p in instance.candidates[r] for q in others]
    below = [g for g in gaps if g < d]
    return max(below) if below else None


def attach_ueg(
    tagged: Union[RoleTaggedInstance, GameInstance], r: int, d: Fraction, eps: Fraction
) -> RoleTaggedInstance:
    """Append a utility enforcement gadget for player r and threshold d.

    The gadget region of length d + 7ε is inserted just before position 0,
    which must hold a single-candidate player (the gadget's closing
    boundary); the circle is then rescaled to unit circumference. The result
    has a PNE iff the original has one in which r gets at least d.
    """
    d, eps = Fraction(d), Fraction(eps)
    if isinstance(tagged, GameInstance):
        tagged = RoleTaggedInstance.untagged(tagged, d, eps)
    instance = tagged.instance
    if instance.variant is not GameVariant.ONE_WAY_1D or instance.objective is not Objective.MAXIMIZE:
        raise PreconditionError("a utility enforcement gadget needs a One-Way maximisation game")
    if not instance.exact:
        raise PreconditionError("a utility enforcement gadget needs exact coordinates")
    if not 0 <= r < instance.n:
        raise PreconditionError(f"player {r} out of range")
    if not any(m == 1 and pts[0] == 0 for m, pts in zip(instance.m, instance.candidates)):
        raise PreconditionError("position 0 must hold a single-candidate player")
    if not 0 < eps < d:
        raise PreconditionError(f"eps={eps} must lie strictly between 0 and d={d}")
    gap = max_sub_d_gap(instance, r, d)
    if gap is not None and not d - eps > gap:
        raise PreconditionError(f"d - eps = {d - eps} does not exceed the utility {gap} player {r} can reach below d")

    region = GadgetRegion(start=Fraction(1), length=d + 7 * eps, d=d, eps=eps)
    builder = _Builder()
    for k, pts in enumerate(instance.candidates):
        points = list(pts)
        variables = list(tagged.candidate_variables[k])
        if k == r:
            points.append(region.r_point)
            variables.append(None)
        builder.add(tagged.roles[k], tagged.labels[k], points, variables, tagged.clause_of[k], tagged.variable_of[k])
    suffix = tagged.labels[r]
    builder.add(PlayerRole.BOUNDARY, f"b[{suffix}]", [region.start])
    builder.add_gadget(region, tagged.clause_of[r], f"[{suffix}]")

    return builder.build(1 + region.length, tagged.d, tagged.eps, tagged.formula)


def max_epsilon() -> Fraction:
    """Exclusive upper bound on ε for ``build_game``, in units of d = 1.

    The same for every formula: the gadget needs d - 7ε > ε before its first
    point whatever the region length, and the wrap and shadow offsets need
    less.
    """
    return EPSILON_LIMIT


def default_epsilon() -> Fraction:
    return max_epsilon() / 2


def build_game(formula: Monotone1in3Formula, eps: Optional[Fraction] = None) -> RoleTaggedInstance:
    """The reduction instance for ``formula`` with gadget spacing ``eps`` (d = 1).

    Players in order: k + l boundaries, l clause players, the two shadow
    players of each clause, k wraps, then x, y, z of each clause's gadget.
    """
    if formula.k < 1:
        raise PreconditionError("the reduction needs at least one variable")
    d = Fraction(1)
    eps = default_epsilon() if eps is None else Fraction(eps)
    check_epsilon(d, eps)

    occurrences = {v: formula.occurrences(v) for v in range(1, formula.k + 1)}
    length = region_length(max((len(o) for o in occurrences.values()), default=0), d)
    variable_regions = {
        v: VariableRegion(start=(v - 1) * length, length=length, d=d, eps=eps, slots=len(occurrences[v]))
        for v in range(1, formula.k + 1)
    }
    gadget_regions = [
        GadgetRegion(start=(formula.k + j) * length, length=length, d=d, eps=eps) for j in range(formula.l)
    ]

    with tracer.start_as_current_span("hardness.build_game") as span:
        span.set_attribute("k", formula.k)
        span.set_attribute("l", formula.l)
        builder = _Builder()
        for v, region in variable_regions.items():
            builder.add(PlayerRole.BOUNDARY, f"b{v}", [region.start])
        for j, region in enumerate(gadget_regions, start=1):
            builder.add(PlayerRole.BOUNDARY, f"b{formula.k + j}", [region.start])

        def slot(v: int, j: int) -> int:
            return occurrences[v].index(j) + 1

        for j, clause in enumerate(formula.clauses):
            points = [variable_regions[v].clause_point(slot(v, j)) for v in clause]
            points.append(gadget_regions[j].r_point)
            builder.add(PlayerRole.CLAUSE, f"c{j + 1}", points, list(clause) + [None], clause=j)
        for j, clause in enumerate(formula.clauses):
            for which, mark in ((0, "'"), (1, "''")):
                points = [variable_regions[v].shadow_points(slot(v, j))[which] for v in clause]
                builder.add(PlayerRole.SHADOW_CLAUSE, f"c{j + 1}{mark}", points, list(clause), clause=j)
        for v, region in variable_regions.items():
            builder.add(PlayerRole.WRAP, f"w{v}", region.wrap_points(), [v, v], variable=v)
        for j, region in enumerate(gadget_regions):
            builder.add_gadget(region, j, str(j + 1))

        tagged = builder.build((formula.k + formula.l) * length, d, eps, formula)
        span.set_attribute("players", tagged.instance.n)
    return tagged


def pad_candidates(tagged: RoleTaggedInstance, m: int) -> RoleTaggedInstance:
    """Give every player exactly m candidates.

    Extra candidates sit just clockwise of the player's first candidate,
    closer than any other candidate point, so each is strictly dominated
    and never part of an equilibrium.
    """
    instance = tagged.instance
    if max(instance.m) > m:
        raise PreconditionError(f"a player already has more than {m} candidates")
    everything = [p for pts in instance.candidates for p in pts]
    candidates, variables = [], []
    for k, pts in enumerate(instance.candidates):
        pad = m - len(pts)
        extra = []
        if pad:
            anchor = pts[0]
            gap = min(clockwise_distance(anchor, q) for q in everything if q != anchor)
            step = min(tagged.eps / 8, gap / 2) / pad
            extra = [(anchor + j * step) % 1 for j in range(1, pad + 1)]
        candidates.append(tuple(pts) + tuple(extra))
        variables.append(tuple(tagged.candidate_variables[k]) + (None,) * pad)
    padded = GameInstance(instance.variant, instance.objective, tuple(candidates))
    return replace(tagged, instance=padded, candidate_variables=tuple(variables))
