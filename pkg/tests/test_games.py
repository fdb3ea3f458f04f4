from fractions import Fraction as F

import pytest

from voronoi_games.errors import DuplicatePointError, InvalidInstanceError, ParseError, PreconditionError
from voronoi_games.games import (
    GameInstance,
    GameVariant,
    Objective,
    best_response,
    build_cycling_square_instance,
    build_fig3_instance,
    deviation_utilities,
    dumps_instance,
    is_pne,
    load_instance,
    loads_instance,
    measures,
    utilities,
)
from voronoi_games.geometry import PlanarPoint


def test_one_way_utilities_are_clockwise_arcs(three_points_circle):
    one_way = GameInstance(GameVariant.ONE_WAY_1D, Objective.MAXIMIZE, three_points_circle.candidates)
    assert utilities(one_way, (0, 0, 0)) == (F(1, 4), F(1, 2), F(1, 4))


def test_voronoi_1d_utilities_are_half_gaps(three_points_circle):
    values = utilities(three_points_circle, (0, 0, 0))
    assert values == (F(1, 4), F(3, 8), F(3, 8))
    assert sum(values) == 1


def test_minimisation_negates(three_points_circle):
    flipped = GameInstance(GameVariant.VORONOI_1D, Objective.MINIMIZE, three_points_circle.candidates)
    assert utilities(flipped, (1, 0, 0)) == tuple(-v for v in utilities(three_points_circle, (1, 0, 0)))
    assert measures(flipped, (1, 0, 0)) == measures(three_points_circle, (1, 0, 0))


def test_small_games():
    alone = GameInstance(GameVariant.VORONOI_1D, Objective.MAXIMIZE, ((F(1, 3),),))
    assert utilities(alone, (0,)) == (1,)
    pair = GameInstance(GameVariant.VORONOI_1D, Objective.MAXIMIZE, ((F(0),), (F(1, 10),)))
    assert utilities(pair, (0, 0)) == (F(1, 2), F(1, 2))


def test_2d_utilities_sum_to_one():
    instance = GameInstance(
        GameVariant.VORONOI_2D_SQUARE,
        Objective.MAXIMIZE,
        ((PlanarPoint(F(1, 4), F(1, 2)),), (PlanarPoint(F(3, 4), F(1, 2)), PlanarPoint(F(3, 4), F(1, 4)))),
    )
    assert utilities(instance, (0, 0)) == (F(1, 2), F(1, 2))
    assert sum(utilities(instance, (0, 1))) == 1


def test_deviation_and_best_response(one_way_example):
    assert deviation_utilities(one_way_example, (0, 0, 0), 0) == [F(1, 4), F(3, 8)]
    assert best_response(one_way_example, (0, 0, 0), 0) == 1
    assert best_response(one_way_example, (1, 0, 0), 0) == 1
    assert not is_pne(one_way_example, (0, 0, 0))
    assert is_pne(one_way_example, (1, 0, 0))


def test_best_response_keeps_current_choice_on_ties(three_points_circle):
    # Both candidates of player 0 lie in gaps of the same length
    assert deviation_utilities(three_points_circle, (0, 0, 0), 0) == [F(1, 4), F(1, 4)]
    assert best_response(three_points_circle, (1, 0, 0), 0) == 1
    assert best_response(three_points_circle, (0, 0, 0), 0) == 0


def test_instance_validation():
    with pytest.raises(DuplicatePointError):
        GameInstance(GameVariant.ONE_WAY_1D, Objective.MAXIMIZE, ((F(0),), (F(0),)))
    with pytest.raises(InvalidInstanceError):
        GameInstance(GameVariant.ONE_WAY_1D, Objective.MAXIMIZE, ((F(1),),))
    with pytest.raises(InvalidInstanceError):
        GameInstance(GameVariant.ONE_WAY_1D, Objective.MAXIMIZE, ((),))
    with pytest.raises(InvalidInstanceError):
        GameInstance(GameVariant.VORONOI_2D_SQUARE, Objective.MAXIMIZE, ((PlanarPoint(F(2), F(0)),),))
    with pytest.raises(DuplicatePointError):
        GameInstance(
            GameVariant.VORONOI_2D_TORUS,
            Objective.MAXIMIZE,
            ((PlanarPoint(F(0), F(0)),), (PlanarPoint(F(1), F(1)),)),
        )


def test_profile_validation(one_way_example):
    with pytest.raises(InvalidInstanceError):
        utilities(one_way_example, (0, 0))
    with pytest.raises(InvalidInstanceError):
        utilities(one_way_example, (2, 0, 0))


def test_instance_document_roundtrip(one_way_example):
    restored = loads_instance(dumps_instance(one_way_example))
    assert restored == one_way_example
    assert restored.exact


def test_float_instance_document():
    instance = GameInstance(GameVariant.VORONOI_1D, Objective.MINIMIZE, ((0.1, 0.7), (0.3,)))
    restored = loads_instance(dumps_instance(instance))
    assert restored.candidates == instance.candidates
    assert not restored.exact


def test_invalid_documents():
    with pytest.raises(ParseError) as info:
        loads_instance('{"variant": "voronoi_1d",\n "players": [}')
    assert info.value.line == 2
    with pytest.raises(InvalidInstanceError):
        loads_instance('{"variant": "voronoi_3d", "players": [["0.1"]]}')
    with pytest.raises(InvalidInstanceError):
        loads_instance('{"variant": "voronoi_2d_square", "exact": true, "players": [["1/2"]]}')


def test_cycling_square_file_matches_construction(data_dir):
    assert load_instance(data_dir / "cycling_square.json") == build_cycling_square_instance()


def test_cycling_square_construction_bounds():
    with pytest.raises(PreconditionError):
        build_cycling_square_instance(epsilon=F(1, 32))
    with pytest.raises(PreconditionError):
        build_cycling_square_instance(n=2)
    with pytest.raises(PreconditionError):
        build_cycling_square_instance(variant=GameVariant.VORONOI_1D)
    assert build_cycling_square_instance(n=5).n == 5


def test_alias_builds_the_same_instance():
    assert build_fig3_instance(F(1, 64)) == build_cycling_square_instance()
    assert build_fig3_instance(F(1, 128), n=5, objective=Objective.MINIMIZE).objective is Objective.MINIMIZE
