from fractions import Fraction as F

import pytest

from voronoi_games.equilibrium import enumerate_pne
from voronoi_games.errors import InvalidInstanceError, ParseError, PreconditionError
from voronoi_games.games import GameInstance, GameVariant, Objective, is_pne, utilities
from voronoi_games.hardness import (
    Monotone1in3Formula,
    PlayerRole,
    RoleTaggedInstance,
    SatWitness,
    attach_ueg,
    build_game,
    check_equivalence,
    complete_shadows,
    extract_assignment,
    format_formula,
    load_formula,
    max_epsilon,
    pad_candidates,
    parse_formula,
    role_document,
    small_formulas,
    solve_1in3,
)
from voronoi_games.hardness.layout import GadgetRegion, VariableRegion, check_epsilon

K4L4 = Monotone1in3Formula(4, [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)])


# ---------------------------------------------------------------------------
# Formulas
# ---------------------------------------------------------------------------


def test_parse_with_header_and_comments():
    formula = parse_formula("c demo\np 1in3 4 2\n\n3 1 2\nc middle\n2 3 4\n")
    assert formula.k == 4
    assert formula.clauses == ((1, 2, 3), (2, 3, 4))
    assert parse_formula(format_formula(formula)) == formula


def test_parse_without_header_uses_largest_variable():
    assert parse_formula("1 5 2\n").k == 5
    assert parse_formula("").k == 0


@pytest.mark.parametrize(
    "text,line,column",
    [
        ("1 2 x\n", 1, 5),
        ("1 2 3\n1 2\n", 2, 1),
        ("1 1 2\n", 1, 1),
        ("p 1in3 3 2\n1 2 3\n", 1, 1),
        ("p 1in3 3 1\n1 2 4\n", 2, 1),
        ("1 2 3\np 1in3 3 1\n", 2, 1),
        ("p cnf 3 1\n", 1, 1),
    ],
)
def test_parse_errors_carry_location(text, line, column):
    with pytest.raises(ParseError) as info:
        parse_formula(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_formula_validation():
    with pytest.raises(InvalidInstanceError):
        Monotone1in3Formula(2, [(1, 2, 3)])
    with pytest.raises(InvalidInstanceError):
        Monotone1in3Formula(3, [(1, 1, 2)])


def test_data_formulas(data_dir):
    assert load_formula(data_dir / "formulas" / "k3l1.txt") == Monotone1in3Formula(3, [(1, 2, 3)])
    assert load_formula(data_dir / "formulas" / "k4l4_unsat.txt") == K4L4


def test_solve_1in3():
    witnesses = solve_1in3(Monotone1in3Formula(3, [(1, 2, 3)]))
    assert [w.true_variables for w in witnesses] == [[1], [2], [3]]
    assert solve_1in3(K4L4) == []
    assert len(solve_1in3(Monotone1in3Formula(2, []))) == 4


def test_solve_refuses_large_formulas():
    with pytest.raises(PreconditionError):
        solve_1in3(Monotone1in3Formula(30, []))


# ---------------------------------------------------------------------------
# Layout
# ---------------------------------------------------------------------------


def test_variable_region_points():
    region = VariableRegion(start=F(0), length=F(3), d=F(1), eps=F(1, 16), slots=2)
    assert region.clause_point(1) == 1
    assert region.clause_point(2) == 2
    assert region.shadow_points(1) == (F(7, 8), F(3, 4))
    assert region.wrap_points() == (F(11, 16), F(11, 4))
    assert region.contains(F(0)) and not region.contains(F(3))

    empty = VariableRegion(start=F(0), length=F(3), d=F(1), eps=F(1, 16), slots=0)
    assert empty.wrap_points() == (F(3, 2), F(11, 4))


def test_gadget_region_points():
    region = GadgetRegion(start=F(0), length=F(2), d=F(1), eps=F(1, 16))
    assert region.x_points == (F(10, 16), F(12, 16))
    assert region.y_points == (F(11, 16), F(15, 16))
    assert region.z_point == F(14, 16)
    # r's extra point sits d - ε before the next boundary
    assert region.r_point == 2 - (1 - F(1, 16))


def test_epsilon_bounds():
    check_epsilon(F(1), F(1, 16))
    for eps in (F(0), F(1, 8), F(1)):
        with pytest.raises(PreconditionError):
            check_epsilon(F(1), eps)
    assert max_epsilon() == F(1, 8)


def test_build_game_epsilon_range():
    formula = Monotone1in3Formula(3, [(1, 2, 3)])
    tagged = build_game(formula)
    assert tagged.eps / tagged.d == max_epsilon() / 2
    tagged = build_game(K4L4)
    assert tagged.eps / tagged.d == max_epsilon() / 2
    with pytest.raises(PreconditionError):
        build_game(formula, max_epsilon())


# ---------------------------------------------------------------------------
# Reduction game
# ---------------------------------------------------------------------------


def test_build_game_roles():
    tagged = build_game(Monotone1in3Formula(3, [(1, 2, 3)]))
    assert tagged.instance.n == 13
    assert tagged.compact_player_count == 12
    assert tagged.role_census == {
        "boundary": 4,
        "clause": 1,
        "shadow_clause": 2,
        "wrap": 3,
        "ueg_x": 1,
        "ueg_y": 1,
        "ueg_z": 1,
    }
    assert tagged.instance.variant is GameVariant.ONE_WAY_1D
    assert tagged.instance.objective is Objective.MAXIMIZE
    (clause,) = tagged.players(PlayerRole.CLAUSE)
    assert tagged.candidate_variables[clause] == (1, 2, 3, None)
    # Circumference 8 in units of d
    assert tagged.d == F(1, 8)
    assert tagged.eps == F(1, 128)


def test_build_game_player_count_grows_with_formula():
    tagged = build_game(K4L4)
    assert tagged.instance.n == 2 * 4 + 7 * 4
    assert max(tagged.instance.m) == 4


def test_build_game_rejects_bad_input():
    with pytest.raises(PreconditionError):
        build_game(Monotone1in3Formula(0, []))
    with pytest.raises(PreconditionError):
        build_game(Monotone1in3Formula(3, [(1, 2, 3)]), eps=F(1, 8))


def test_role_document():
    tagged = build_game(Monotone1in3Formula(3, [(1, 2, 3)]))
    doc = role_document(tagged).model_dump(mode="json")
    assert doc["player_count"] == 13
    assert doc["compact_player_count"] == 12
    assert doc["d"] == "1/8"
    assert doc["roles"][0] == "boundary"


def test_pad_candidates_adds_dominated_points(one_way_example):
    tagged = RoleTaggedInstance.untagged(one_way_example, F(1, 4), F(1, 16))
    padded = pad_candidates(tagged, 3)
    assert padded.instance.m == (3, 3, 3)
    assert padded.candidate_variables[1] == (None, None, None)
    assert enumerate_pne(padded.instance) == [(1, 0, 0)]
    with pytest.raises(PreconditionError):
        pad_candidates(tagged, 1)


# ---------------------------------------------------------------------------
# Utility enforcement gadget
# ---------------------------------------------------------------------------


def _pair_on_circle() -> GameInstance:
    # Player 1 either takes the half circle or a quarter of it
    return GameInstance(GameVariant.ONE_WAY_1D, Objective.MAXIMIZE, ((F(0),), (F(1, 2), F(3, 4))))


def test_attach_ueg_keeps_equilibria_that_meet_the_threshold():
    tagged = attach_ueg(_pair_on_circle(), 1, F(1, 2), F(1, 64))
    assert tagged.instance.n == 2 + 4
    assert tagged.instance.m[1] == 3
    assert tagged.role_census["ueg_x"] == 1
    assert enumerate_pne(tagged.instance)


def test_attach_ueg_removes_equilibria_below_the_threshold():
    # Player 1 reaches at most 1/2 < d, so x and y chase each other in every profile
    tagged = attach_ueg(_pair_on_circle(), 1, F(3, 4), F(1, 64))
    assert tagged.instance.n == 2 + 4
    assert enumerate_pne(tagged.instance) == []


def test_attach_ueg_preconditions():
    with pytest.raises(PreconditionError):
        attach_ueg(_pair_on_circle(), 5, F(1, 2), F(1, 64))
    with pytest.raises(PreconditionError):
        attach_ueg(_pair_on_circle(), 1, F(1, 2), F(1, 2))
    shifted = GameInstance(GameVariant.ONE_WAY_1D, Objective.MAXIMIZE, ((F(1, 8),), (F(1, 2),)))
    with pytest.raises(PreconditionError):
        attach_ueg(shifted, 1, F(1, 2), F(1, 64))
    voronoi = GameInstance(GameVariant.VORONOI_1D, Objective.MAXIMIZE, ((F(0),), (F(1, 2),)))
    with pytest.raises(PreconditionError):
        attach_ueg(voronoi, 1, F(1, 2), F(1, 64))


# ---------------------------------------------------------------------------
# Equivalence
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "formula",
    [
        Monotone1in3Formula(1, []),
        Monotone1in3Formula(3, [(1, 2, 3)]),
        Monotone1in3Formula(4, [(1, 2, 3), (1, 2, 4)]),
    ],
)
def test_satisfiable_formulas_have_equilibria(formula):
    report = check_equivalence(formula)
    assert report.sat_exists and report.pne_exists
    assert report.passed
    assert report.extracted is None or report.extracted.valid


def test_completion_from_a_witness():
    formula = Monotone1in3Formula(3, [(1, 2, 3)])
    tagged = build_game(formula)
    for witness in solve_1in3(formula):
        profile = complete_shadows(tagged, witness)
        assert is_pne(tagged.instance, profile)
        (clause,) = tagged.players(PlayerRole.CLAUSE)
        assert utilities(tagged.instance, profile)[clause] == tagged.d
        assert extract_assignment(tagged, profile).assignment == witness.assignment


def test_completion_rejects_non_witnesses():
    formula = Monotone1in3Formula(3, [(1, 2, 3)])
    tagged = build_game(formula)
    with pytest.raises(PreconditionError):
        complete_shadows(tagged, SatWitness((True, True, False)))


def test_extraction_needs_the_formula(one_way_example):
    tagged = RoleTaggedInstance.untagged(one_way_example, F(1, 4), F(1, 16))
    with pytest.raises(PreconditionError):
        extract_assignment(tagged, (1, 0, 0))


def test_small_formulas():
    formulas = list(small_formulas(3, 2))
    assert [(f.k, f.clauses) for f in formulas] == [
        (1, ()),
        (2, ()),
        (3, ()),
        (3, ((1, 2, 3),)),
        (3, ((1, 2, 3), (1, 2, 3))),
    ]
    assert len(list(small_formulas(4, 1))) == 9


@pytest.mark.slow
@pytest.mark.parametrize("formula", list(small_formulas(3, 2)), ids=str)
def test_every_small_formula_agrees_with_its_game(formula):
    report = check_equivalence(formula)
    assert report.agree and report.passed


@pytest.mark.slow
def test_unsatisfiable_formula_has_no_equilibrium():
    report = check_equivalence(K4L4)
    assert not report.sat_exists
    assert not report.pne_exists
    assert report.passed
