import json

from voronoi_games.app.cli import build_parser, main
from voronoi_games.config.settings import settings
from voronoi_games.eval import list_checks


def test_list_checks(capsys):
    assert main(["checks", "--list"]) == 0
    out = capsys.readouterr().out
    assert "beta_moments" in out
    assert "reduction_unsat" in out and "[slow]" in out


def test_single_check_passes_and_writes_csv(tmp_path, capsys):
    out = tmp_path / "checks.csv"
    assert main(["checks", "--only", "monotone_bijection", "--out", str(out)]) == 0
    assert out.read_text().startswith("# voronoi-games estimators v1")
    assert "1/1 checks passed" in capsys.readouterr().err


def test_mutated_check_fails(tmp_path):
    out = tmp_path / "checks.csv"
    assert main(["checks", "--only", "monotone_bijection", "--mutate", "monotone_bijection", "--out", str(out)]) == 1


def test_mutated_estimator_fails(tmp_path):
    args = ["checks", "--only", "beta_moments", "--scale", "0.25", "--seed", "5", "--out", str(tmp_path / "b.csv")]
    assert main(args) == 0
    assert main(args + ["--mutate", "beta_moments"]) == 1


def test_unknown_check_is_an_input_error(capsys):
    assert main(["checks", "--only", "no_such_check"]) == 2
    assert "no_such_check" in capsys.readouterr().err


def test_pne_command(data_dir, tmp_path):
    out = tmp_path / "pne.json"
    assert main(["pne", str(data_dir / "cycling_square.json"), "--out", str(out)]) == 0
    result = json.loads(out.read_text())
    assert result["count"] == 0
    assert result["equilibria"] == []


def test_pne_missing_file(tmp_path, capsys):
    assert main(["pne", str(tmp_path / "nope.json")]) == 2
    assert "❌" in capsys.readouterr().err


def test_eval_command(data_dir, capsys):
    code = main([
        "eval",
        str(data_dir / "circle_three_players.json"),
        str(data_dir / "circle_three_players.dist.json"),
    ])
    assert code == 0
    rows = json.loads(capsys.readouterr().out)["rows"]
    assert len(rows) == 6
    assert rows[-1]["expected_utility"] == "1/3"


def test_reduce_then_pne(data_dir, tmp_path, capsys):
    game = tmp_path / "game.json"
    assert main(["reduce", str(data_dir / "formulas" / "k3l1.txt"), str(game)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["player_count"] == 13
    assert main(["pne", str(game), "--method", "search"]) == 0
    assert json.loads(capsys.readouterr().out)["count"] == 1


def test_reduce_rejects_large_epsilon(data_dir, tmp_path):
    assert main(["reduce", str(data_dir / "formulas" / "k3l1.txt"), str(tmp_path / "g.json"), "--eps", "1/2"]) == 2


def test_experiment_command(tmp_path):
    out = tmp_path / "exp.csv"
    code = main([
        "--workers", "1",
        "experiment",
        "--variant", "voronoi_1d",
        "--objective", "min",
        "--n", "4",
        "--m", "2",
        "--instances", "3",
        "--attempts", "2",
        "--seed", "11",
        "--out", str(out),
    ])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "# voronoi-games experiment v1 seed=11"
    # thresholds 1 and 2
    assert len(lines) == 4
    assert all(line.startswith("voronoi_1d,min,4,2,") for line in lines[2:])


def test_acceptance_grids_are_registered_as_slow():
    slow = {name for name, _, is_slow in list_checks() if is_slow}
    assert {"pne_bracket_grid", "min_objective_bound", "voronoi_1d_convergence", "reduction_grid"} <= slow


def test_convergence_check_at_small_scale(tmp_path):
    args = ["checks", "--only", "voronoi_1d_convergence", "--scale", "0.005", "--seed", "2", "--out", str(tmp_path / "c.csv")]
    assert main(args) == 0


def test_paper_scale_flag():
    parser = build_parser()
    assert parser.parse_args(["experiment", "--paper-scale"]).paper_scale
    assert parser.parse_args(["experiment", "--full-scale"]).paper_scale
    assert not parser.parse_args(["experiment"]).paper_scale


def test_experiment_rejects_invalid_settings(capsys):
    assert main(["--workers", "1", "experiment", "--attempts", "0"]) == 2
    assert main(["--workers", "1", "experiment", "--n", "0", "--m", "2", "--instances", "1"]) == 2
    assert "n_values" in capsys.readouterr().err


def test_json_outputs_record_the_seed(data_dir, tmp_path, capsys):
    out = tmp_path / "pne.json"
    assert main(["pne", str(data_dir / "cycling_square.json"), "--seed", "42", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["seed"] == 42

    assert main(["reduce", str(data_dir / "formulas" / "k3l1.txt"), str(tmp_path / "g.json"), "--seed", "5"]) == 0
    assert json.loads(capsys.readouterr().out)["seed"] == 5

    assert main([
        "eval",
        str(data_dir / "circle_three_players.json"),
        str(data_dir / "circle_three_players.dist.json"),
    ]) == 0
    assert json.loads(capsys.readouterr().out)["seed"] == settings.seed
