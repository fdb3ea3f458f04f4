import io
import json

import pytest

from voronoi_games.games import GameVariant, Objective, is_pne, load_instance
from voronoi_games.eval import load_reference_tables, reference_counts, reference_max_passes
from voronoi_games.services import ExperimentConfig, ExperimentService, GameService
from voronoi_games.services.experiment_service import EXPERIMENT_COLUMNS, within_band


@pytest.fixture
def service(data_dir) -> GameService:
    return GameService(data_dir=data_dir)


def test_find_pne_on_the_cycling_square(service):
    result = service.find_pne("cycling_square.json")
    assert result["found"]
    assert result["method"] == "enumerate"
    assert result["count"] == 0
    assert result["complete"]


def test_find_pne_reports_equilibrium_utilities(service):
    result = service.find_pne("circle_three_players.json")
    assert result["found"]
    assert result["count"] == len(result["equilibria"]) == len(result["utilities"])


def test_evaluate_circle_distribution(service):
    result = service.evaluate("circle_three_players.json", "circle_three_players.dist.json")
    assert result["found"]
    assert len(result["rows"]) == 6
    player2 = [row for row in result["rows"] if row["player"] == 2]
    assert [row["expected_utility"] for row in player2] == ["1/3", "1/3"]
    assert [row["probability"] for row in player2] == ["1", "0"]


def test_reduce_then_search(service, tmp_path):
    out = tmp_path / "k3l1.json"
    result = service.reduce("formulas/k3l1.txt", out)
    assert result["found"]
    assert result["player_count"] == 13
    assert result["compact_player_count"] == 12
    assert (tmp_path / "k3l1.roles.json").exists()
    roles = json.loads((tmp_path / "k3l1.roles.json").read_text())
    assert roles["player_count"] == 13

    found = service.find_pne(out, method="search")
    assert found["found"] and found["count"] == 1
    assert not found["complete"]
    assert is_pne(load_instance(out), tuple(found["equilibria"][0]))


def test_reduce_with_padding(service, tmp_path):
    result = service.reduce("formulas/k3l1.txt", tmp_path / "padded.json", pad_to=4)
    assert result["found"]
    assert set(load_instance(tmp_path / "padded.json").m) == {4}


def test_input_errors_map_to_exit_codes(service, tmp_path):
    missing = service.find_pne(tmp_path / "missing.json")
    assert not missing["found"] and missing["exit_code"] == 2
    assert service.find_pne("circle_three_players.json", method="bogus")["exit_code"] == 2
    assert service.evaluate("circle_three_players.json", tmp_path / "missing.json")["exit_code"] == 2
    assert service.reduce(tmp_path / "missing.txt", tmp_path / "out.json")["exit_code"] == 2


def test_budget_errors_map_to_exit_code_three(service):
    result = service.find_pne("circle_three_players.json", method="enumerate", budget=1)
    assert not result["found"]
    assert result["exit_code"] == 3


def test_equivalence_service(service):
    result = service.equivalence("formulas/k3l1.txt")
    assert result["found"]
    assert result["agree"] and result["passed"]
    assert result["witnesses"] == 3
    assert sum(result["extracted"]) == 1


# ---------------------------------------------------------------------------
# Experiments
# ---------------------------------------------------------------------------


def test_empty_experiment():
    config = ExperimentConfig(instances=0)
    assert ExperimentService(workers=1).run(config) == {"found": True, "rows": [], "seed": config.seed}


def test_voronoi_1d_experiment_always_succeeds():
    config = ExperimentConfig(
        variant=GameVariant.VORONOI_1D,
        objective=Objective.MAXIMIZE,
        n_values=[5],
        m_values=[2, 3],
        instances=5,
        attempts=1,
        max_passes=1000,
        seed=3,
    )
    result = ExperimentService(workers=1).run(config)
    assert result["found"]
    assert [(r["m"], r["threshold"]) for r in result["rows"]] == [(2, 1), (3, 1)]
    assert all(r["rate"] == 1.0 for r in result["rows"])
    assert all(r["reference_successes"] is None for r in result["rows"])

    again = ExperimentService(workers=1).run(config)
    assert again == result


def test_experiment_csv():
    out = io.StringIO()
    row = {c: None for c in EXPERIMENT_COLUMNS} | {"variant": "one_way_1d", "n": 10, "m": 2}
    ExperimentService.write_csv([row], out, seed=3)
    lines = out.getvalue().splitlines()
    assert lines[0] == "# voronoi-games experiment v1 seed=3"
    assert lines[1] == ",".join(EXPERIMENT_COLUMNS)
    assert lines[2].startswith("one_way_1d,,10,2,")


def test_presets():
    desk = ExperimentConfig.preset(GameVariant.VORONOI_2D_TORUS, Objective.MINIMIZE)
    assert desk.n_values == [10, 50] and desk.attempts == 10
    full = ExperimentConfig.preset(GameVariant.ONE_WAY_1D, Objective.MAXIMIZE, paper_scale=True, instances=7)
    assert full.n_values == [10, 100, 1000, 10000]
    assert full.instances == 7
    assert ExperimentConfig(attempts=3).active_thresholds == [1, 2, 3]


def test_within_band():
    assert within_band(600, 1000, 609, 1000)
    assert not within_band(100, 1000, 609, 1000)
    assert within_band(0, 1000, 0, 1000)


def test_reference_tables():
    tables = load_reference_tables()
    assert tables.instances == 1000
    assert reference_counts(GameVariant.ONE_WAY_1D, Objective.MAXIMIZE, 10, 2) == {
        1: 616, 2: 633, 5: 652, 10: 663, 100: 668
    }
    assert reference_counts(GameVariant.VORONOI_2D_SQUARE, Objective.MINIMIZE, 10, 2) == reference_counts(
        GameVariant.VORONOI_2D_TORUS, Objective.MINIMIZE, 10, 2
    )
    assert reference_counts(GameVariant.ONE_WAY_1D, Objective.MAXIMIZE, 7, 2) is None
    assert reference_max_passes(GameVariant.VORONOI_1D, Objective.MAXIMIZE, 100, 3) == 9


@pytest.mark.slow
def test_one_way_cell_matches_the_reference_band():
    config = ExperimentConfig.preset(
        GameVariant.ONE_WAY_1D, Objective.MAXIMIZE, n_values=[10], m_values=[2], seed=7
    )
    assert config.instances == 200 and config.attempts == 100
    rows = ExperimentService(workers=1).run(config)["rows"]
    (row,) = [r for r in rows if r["threshold"] == 100]
    assert row["reference_successes"] == 668
    assert row["within_band"]
    assert within_band(row["successes"], row["instances"], 668, load_reference_tables().instances)


def test_experiment_precondition_errors_map_to_exit_codes():
    config = ExperimentConfig.model_construct(
        **(ExperimentConfig(instances=1, attempts=1).model_dump() | {"n_values": [0], "m_values": [2]})
    )
    result = ExperimentService(workers=1).run(config)
    assert not result["found"]
    assert result["exit_code"] == 2


def test_results_carry_the_seed(data_dir, tmp_path):
    service = GameService(data_dir=data_dir, seed=9)
    assert service.find_pne("cycling_square.json")["seed"] == 9
    assert service.evaluate("circle_three_players.json", "circle_three_players.dist.json")["seed"] == 9
    assert service.reduce("formulas/k3l1.txt", tmp_path / "g.json")["seed"] == 9
    assert service.equivalence("formulas/k3l1.txt")["seed"] == 9
