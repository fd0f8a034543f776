import csv
import json

import pytest
from click.testing import CliRunner

from stardrift.cli import main


@pytest.fixture(scope="module")
def runner():
    return CliRunner()


@pytest.fixture(scope="module")
def cli_pool(tmp_path_factory, runner):
    directory = tmp_path_factory.mktemp("clipool")
    result = runner.invoke(main, ["make-pool", "--out", str(directory), "--count", "6", "--seed", "3"])
    assert result.exit_code == 0, result.output
    return directory


class TestMakePool:
    def test_creates_icons(self, cli_pool):
        assert len(list(cli_pool.glob("*.png"))) == 6


class TestAttackCommand:
    def test_csv_schema(self, runner, cli_pool, tmp_path):
        out = tmp_path / "attack.csv"
        result = runner.invoke(
            main,
            [
                "attack", "--strategy", "minsize", "--challenges", "2", "--seed", "5",
                "--grid-step", "8", "--psi", "0", "--delta", "5",
                "--pool", str(cli_pool), "--out", str(out),
            ],
        )
        assert result.exit_code == 0, result.output
        rows = list(csv.DictReader(out.open()))
        assert len(rows) == 2
        assert set(rows[0]) == {"challenge_seed", "strategy", "success", "score", "wall_time"}

    def test_ml_requires_model(self, runner, cli_pool):
        result = runner.invoke(
            main, ["attack", "--strategy", "ml", "--challenges", "1", "--pool", str(cli_pool)]
        )
        assert result.exit_code != 0


class TestBenchCommands:
    def test_random_guess(self, runner):
        result = runner.invoke(main, ["bench", "random-guess", "--trials", "20000", "--seed", "1"])
        assert result.exit_code == 0
        assert "random-guess success rate" in result.output

    def test_profile(self, runner, cli_pool, tmp_path):
        out = tmp_path / "profile.csv"
        result = runner.invoke(
            main, ["bench", "profile", "--n", "10", "--pool", str(cli_pool), "--out", str(out)]
        )
        assert result.exit_code == 0, result.output
        assert "mean_total" in result.output
        assert out.exists()

    def test_sweep_with_bound(self, runner, cli_pool, tmp_path):
        out = tmp_path / "sweep.csv"
        result = runner.invoke(
            main,
            [
                "bench", "sweep", "--strategies", "minsize", "--psi-values", "0",
                "--delta-values", "5", "--per-cell", "2", "--grid-step", "8",
                "--pool", str(cli_pool), "--out", str(out), "--seed", "2",
                "--bound", "minsize,0,5,>,-0.1",
            ],
        )
        assert result.exit_code == 0, result.output
        assert out.exists()

    def test_sweep_bound_violation_exits_nonzero(self, runner, cli_pool, tmp_path):
        out = tmp_path / "sweep2.csv"
        result = runner.invoke(
            main,
            [
                "bench", "sweep", "--strategies", "minsize", "--psi-values", "0",
                "--delta-values", "5", "--per-cell", "2", "--grid-step", "8",
                "--pool", str(cli_pool), "--out", str(out), "--seed", "2",
                "--bound", "minsize,0,5,<,-1",
            ],
        )
        assert result.exit_code == 1


class TestMlTrainCommand:
    def test_train_and_attack(self, runner, cli_pool, tmp_path):
        model_path = tmp_path / "model.bin"
        result = runner.invoke(
            main,
            [
                "ml-train", "--omega", "15", "--challenges", "2", "--states", "30",
                "--seed", "4", "--classifier", "logistic",
                "--pool", str(cli_pool), "--out", str(model_path),
            ],
        )
        assert result.exit_code == 0, result.output
        assert model_path.exists()

        attack_result = runner.invoke(
            main,
            [
                "attack", "--strategy", "ml", "--challenges", "1", "--seed", "6",
                "--model", str(model_path), "--pool", str(cli_pool),
            ],
        )
        assert attack_result.exit_code == 0, attack_result.output
        assert "ml" in attack_result.output


class TestGoldenVectors:
    def test_emits_requested_pairs(self, runner, cli_pool, tmp_path):
        out = tmp_path / "golden.json"
        result = runner.invoke(
            main,
            ["golden-vectors", "--out", str(out), "--pairs", "12", "--seed", "0", "--pool", str(cli_pool)],
        )
        assert result.exit_code == 0, result.output
        data = json.loads(out.read_text())
        total = sum(len(g["cases"]) for g in data["challenges"])
        assert total == 12
        for group in data["challenges"]:
            assert set(group["stars"][0]) == {"m_xx", "m_xy", "c_x", "m_yx", "m_yy", "c_y"}
