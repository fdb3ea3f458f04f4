import io
import itertools
from fractions import Fraction as F

import numpy as np
import pytest

from voronoi_games.equilibrium import (
    ArcMultiset,
    DynamicsStatus,
    DynamicsTraceWriter,
    PotentialOrder,
    enumerate_pne,
    find_pne_backtracking,
    improving_move_potential_ok,
    multi_start_search,
    potential_compare,
    run_best_response,
)
from voronoi_games.equilibrium.dynamics import MoveEvent
from voronoi_games.errors import BudgetExceededError, PreconditionError
from voronoi_games.games import GameVariant, Objective, build_cycling_square_instance, is_pne
from voronoi_games.randomgames import random_instance


def test_enumerate_finds_the_only_equilibrium(one_way_example):
    assert enumerate_pne(one_way_example) == [(1, 0, 0)]


def test_enumerate_respects_budget(one_way_example):
    with pytest.raises(BudgetExceededError) as info:
        enumerate_pne(one_way_example, budget=1)
    assert info.value.exit_code == 3


@pytest.mark.parametrize("variant", [GameVariant.ONE_WAY_1D, GameVariant.VORONOI_1D])
@pytest.mark.parametrize("objective", [Objective.MAXIMIZE, Objective.MINIMIZE])
def test_vectorized_enumeration_matches_is_pne(variant, objective):
    for seed in range(5):
        instance = random_instance(4, 3, variant, objective, seed=seed)
        brute = [p for p in itertools.product(*(range(m) for m in instance.m)) if is_pne(instance, p)]
        assert enumerate_pne(instance) == brute


@pytest.mark.parametrize("n", [3, 5])
@pytest.mark.parametrize("objective", [Objective.MAXIMIZE, Objective.MINIMIZE])
def test_cycling_square_has_no_equilibrium(n, objective):
    assert enumerate_pne(build_cycling_square_instance(n=n, objective=objective)) == []


def test_dynamics_converge_on_example(one_way_example):
    outcome = run_best_response(one_way_example, (0, 0, 0), max_passes=10)
    assert outcome.status is DynamicsStatus.CONVERGED
    assert outcome.profile == (1, 0, 0)
    assert outcome.passes == 2
    assert outcome.moves == 1


def test_dynamics_detect_cycles_without_equilibrium():
    instance = build_cycling_square_instance()
    outcome = run_best_response(instance, (0, 0, 0), max_passes=100)
    assert outcome.status is DynamicsStatus.GAVE_UP
    assert outcome.cycle_detected
    assert outcome.passes <= instance.profile_count


def test_dynamics_give_up_at_pass_limit():
    outcome = run_best_response(build_cycling_square_instance(), (0, 0, 0), max_passes=1, detect_cycles=False)
    assert outcome.status is DynamicsStatus.GAVE_UP
    assert outcome.passes == 1
    assert not outcome.cycle_detected


def test_dynamics_preconditions(one_way_example):
    with pytest.raises(PreconditionError):
        run_best_response(one_way_example, (0, 0, 0), max_passes=0)
    with pytest.raises(PreconditionError):
        multi_start_search(one_way_example, attempts=0, max_passes=10)


@pytest.mark.parametrize("objective", [Objective.MAXIMIZE, Objective.MINIMIZE])
def test_voronoi_1d_dynamics_always_converge(objective):
    for seed in range(20):
        instance = random_instance(12, 3, GameVariant.VORONOI_1D, objective, seed=seed)
        outcome = multi_start_search(instance, attempts=1, max_passes=1000, seed=seed)
        assert outcome.converged
        assert is_pne(instance, outcome.profile)


def test_multi_start_is_reproducible():
    instance = random_instance(10, 2, GameVariant.ONE_WAY_1D, Objective.MAXIMIZE, seed=3)
    first = multi_start_search(instance, attempts=20, max_passes=200, seed=99)
    again = multi_start_search(instance, attempts=20, max_passes=200, seed=99)
    assert first == again
    if first.converged:
        assert is_pne(instance, first.profile)


def test_first_attempt_can_start_from_first_choices(one_way_example):
    outcome = multi_start_search(one_way_example, attempts=1, max_passes=10, first_all_zero=True)
    assert outcome.converged
    assert outcome.moves == 1


def test_potential_order():
    assert potential_compare(ArcMultiset.of([0.5, 0.3, 0.2]), ArcMultiset.of([0.5, 0.25, 0.25])) is PotentialOrder.GREATER
    assert potential_compare(ArcMultiset.of([0.5, 0.5]), ArcMultiset.of([0.5, 0.25, 0.25])) is PotentialOrder.GREATER
    assert potential_compare(ArcMultiset.of([0.2, 0.8]), ArcMultiset.of([0.8, 0.2])) is PotentialOrder.EQUAL
    assert potential_compare(ArcMultiset.of([0.6, 0.4]), ArcMultiset.of([0.7, 0.3])) is PotentialOrder.LESS


def test_arc_multiset_of_profile(three_points_circle):
    arcs = ArcMultiset.from_profile(three_points_circle, (0, 0, 0))
    assert arcs.arcs == (F(1, 2), F(1, 4), F(1, 4))
    with pytest.raises(PreconditionError):
        ArcMultiset.from_profile(build_cycling_square_instance(), (0, 0, 0))


@pytest.mark.parametrize("objective", [Objective.MAXIMIZE, Objective.MINIMIZE])
def test_every_improving_move_respects_the_potential(objective):
    rng = np.random.default_rng(5)
    for _ in range(10):
        instance = random_instance(8, 3, GameVariant.VORONOI_1D, objective, rng=rng)
        profile = [0] * instance.n

        def check(event: MoveEvent) -> None:
            before = list(profile)
            profile[event.player] = event.new_choice
            assert improving_move_potential_ok(instance, before, profile)

        outcome = run_best_response(instance, profile, max_passes=1000, on_move=check)
        assert outcome.converged


@pytest.mark.parametrize("objective", [Objective.MAXIMIZE, Objective.MINIMIZE])
def test_backtracking_matches_enumeration(objective):
    for seed in range(8):
        instance = random_instance(5, 3, GameVariant.ONE_WAY_1D, objective, seed=100 + seed)
        result = find_pne_backtracking(instance, first_only=False)
        assert sorted(result.profiles) == enumerate_pne(instance)
        assert result.nodes > 0


def test_backtracking_first_only_and_budget(one_way_example):
    result = find_pne_backtracking(one_way_example)
    assert result.found and result.profiles == [(1, 0, 0)]
    with pytest.raises(BudgetExceededError):
        find_pne_backtracking(one_way_example, budget=0)


def test_backtracking_rejects_other_variants(three_points_circle, one_way_example):
    with pytest.raises(PreconditionError):
        find_pne_backtracking(three_points_circle)
    with pytest.raises(PreconditionError):
        find_pne_backtracking(one_way_example, order=[1])


def test_move_trace_rows(one_way_example):
    out = io.StringIO()
    writer = DynamicsTraceWriter(out, seed=7)
    outcome = run_best_response(one_way_example, (0, 0, 0), max_passes=10, on_move=writer)
    lines = out.getvalue().splitlines()
    assert lines[0] == "# voronoi-games dynamics-trace v1 seed=7"
    assert lines[1].startswith("attempt,pass,player")
    assert writer.rows == outcome.moves == len(lines) - 2


@pytest.mark.slow
@pytest.mark.parametrize("n", [10, 100])
@pytest.mark.parametrize("objective", [Objective.MAXIMIZE, Objective.MINIMIZE])
def test_voronoi_1d_dynamics_converge_at_scale(n, objective):
    rng = np.random.default_rng(n)
    for _ in range(1000):
        instance = random_instance(n, 3, GameVariant.VORONOI_1D, objective, rng=rng)
        profile = [int(i) for i in rng.integers(0, 3, size=n)]
        broken: list[MoveEvent] = []

        def check(event: MoveEvent) -> None:
            before = list(profile)
            profile[event.player] = event.new_choice
            if not improving_move_potential_ok(instance, before, profile):
                broken.append(event)

        outcome = run_best_response(instance, profile, max_passes=100_000, on_move=check)
        assert outcome.converged
        assert not broken
