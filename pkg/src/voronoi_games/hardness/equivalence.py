"""End-to-end check that the reduction game has a PNE iff the formula is satisfiable."""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from opentelemetry import trace

from voronoi_games.equilibrium import find_pne_backtracking
from voronoi_games.errors import PreconditionError
from voronoi_games.games import StrategyProfile, best_response, is_pne, utilities
from voronoi_games.hardness.formula import Monotone1in3Formula, SatWitness, solve_1in3
from voronoi_games.hardness.reduction import PlayerRole, RoleTaggedInstance, build_game

tracer = trace.get_tracer(__name__)


def _shadows_descending(tagged: RoleTaggedInstance) -> list[int]:
    shadows = tagged.players(PlayerRole.SHADOW_CLAUSE)
    return sorted(shadows, key=lambda k: (-tagged.clause_of[k], k))


def search_order(tagged: RoleTaggedInstance) -> list[int]:
    """Clause players, gadget x/y pairs, wraps, then shadows by descending clause.

    With this order a shadow's successors are all fixed when it is assigned,
    so it is checked (and pruned) immediately.
    """
    movers = {k for k, m in enumerate(tagged.instance.m) if m > 1}
    gadget = sorted(
        (k for k in movers if tagged.roles[k] in (PlayerRole.UEG_X, PlayerRole.UEG_Y)),
        key=lambda k: (tagged.clause_of[k] if tagged.clause_of[k] is not None else -1, k),
    )
    head = [k for k in tagged.players(PlayerRole.CLAUSE) if k in movers]
    head += gadget
    head += [k for k in tagged.players(PlayerRole.WRAP) if k in movers]
    head += [k for k in _shadows_descending(tagged) if k in movers]
    return head + sorted(movers - set(head))


def extract_assignment(tagged: RoleTaggedInstance, profile: Sequence[int]) -> SatWitness:
    """Variables whose region holds a chosen clause point are true.

    ``valid`` means every clause player sits in a variable region and every
    clause has exactly one true variable.
    """
    formula = tagged.formula
    if formula is None:
        raise PreconditionError("assignment extraction needs the formula the game was built from")
    chosen = [tagged.candidate_variables[k][profile[k]] for k in tagged.players(PlayerRole.CLAUSE)]
    true_vars = {v for v in chosen if v is not None}
    assignment = tuple(v in true_vars for v in range(1, formula.k + 1))
    valid = None not in chosen and formula.satisfied_by(assignment)
    return SatWitness(assignment, valid)


def complete_shadows(tagged: RoleTaggedInstance, witness: SatWitness, max_sweeps: Optional[int] = None) -> StrategyProfile:
    """The equilibrium a satisfying assignment induces.

    Clause players take their true variable, gadget pairs their stable
    points, wraps their left point in true regions and right point in false
    ones. Shadows start on the false regions of their clause (c' on the
    first, c'' on the second), then shadows in descending clause order and
    the wraps are moved to best responses until a sweep changes nothing.
    """
    formula = tagged.formula
    if formula is None or not witness.valid or not formula.satisfied_by(witness.assignment):
        raise PreconditionError("completion needs a valid witness for the game's formula")
    instance = tagged.instance
    truth = witness.assignment
    profile = [0] * instance.n

    for k in tagged.players(PlayerRole.CLAUSE):
        profile[k] = next(i for i, v in enumerate(tagged.candidate_variables[k]) if v is not None and truth[v - 1])
    for k in tagged.players(PlayerRole.UEG_Y):
        profile[k] = 1
    for k in tagged.players(PlayerRole.WRAP):
        profile[k] = 0 if truth[tagged.variable_of[k] - 1] else 1
    seen_clause: dict[int, int] = {}
    for k in tagged.players(PlayerRole.SHADOW_CLAUSE):
        j = tagged.clause_of[k]
        false_slots = [i for i, v in enumerate(tagged.candidate_variables[k]) if v is not None and not truth[v - 1]]
        rank = seen_clause.get(j, 0)
        profile[k] = false_slots[min(rank, len(false_slots) - 1)]
        seen_clause[j] = rank + 1

    movers = _shadows_descending(tagged) + tagged.players(PlayerRole.WRAP)
    sweeps = max_sweeps if max_sweeps is not None else 2 * len(movers) + 2
    with tracer.start_as_current_span("hardness.complete_shadows") as span:
        changed, sweep = False, 0
        for sweep in range(1, sweeps + 1):
            changed = False
            for k in movers:
                best = best_response(instance, profile, k)
                if best != profile[k]:
                    profile[k] = best
                    changed = True
            if not changed:
                break
        span.set_attribute("sweeps", sweep)
        if changed or not is_pne(instance, profile):
            raise PreconditionError("completion did not reach an equilibrium")
    return tuple(profile)


def clause_utilities_equal_d(tagged: RoleTaggedInstance, profile: Sequence[int]) -> bool:
    values = utilities(tagged.instance, profile)
    return all(values[k] == tagged.d for k in tagged.players(PlayerRole.CLAUSE))


@dataclass(frozen=True)
class EquivalenceReport:
    pne_exists: bool
    sat_exists: bool
    witness_count: int
    nodes: int
    profile: Optional[StrategyProfile] = None
    extracted: Optional[SatWitness] = None
    clause_utilities_ok: bool = True
    completion_ok: bool = True

    @property
    def agree(self) -> bool:
        return self.pne_exists == self.sat_exists

    @property
    def passed(self) -> bool:
        extracted_ok = self.extracted is None or self.extracted.valid
        return self.agree and extracted_ok and self.clause_utilities_ok and self.completion_ok


def check_equivalence(
    formula: Monotone1in3Formula, eps: Optional[Fraction] = None, budget: Optional[int] = None
) -> EquivalenceReport:
    tagged = build_game(formula, eps)
    witnesses = solve_1in3(formula)
    with tracer.start_as_current_span("hardness.check_equivalence") as span:
        span.set_attribute("k", formula.k)
        span.set_attribute("l", formula.l)
        result = find_pne_backtracking(tagged.instance, budget=budget, first_only=True, order=search_order(tagged))
        profile = result.profiles[0] if result.found else None
        extracted = extract_assignment(tagged, profile) if profile is not None else None
        clause_ok = profile is None or clause_utilities_equal_d(tagged, profile)

        completion_ok = True
        if witnesses:
            try:
                completed = complete_shadows(tagged, witnesses[0])
                completion_ok = clause_utilities_equal_d(tagged, completed)
            except PreconditionError:
                completion_ok = False

        report = EquivalenceReport(
            pne_exists=result.found,
            sat_exists=bool(witnesses),
            witness_count=len(witnesses),
            nodes=result.nodes,
            profile=profile,
            extracted=extracted,
            clause_utilities_ok=clause_ok,
            completion_ok=completion_ok,
        )
        span.set_attribute("nodes", result.nodes)
        span.set_attribute("agree", report.agree)
    return report
