import json

import pytest

from acwi.cli import main, parse_args
from acwi.config import RunConfig, load_config, save_config
from acwi.trainer import read_metrics
from helpers import SMALL


@pytest.fixture
def small_toml(tmp_path):
    path = tmp_path / "c.toml"
    save_config(RunConfig(**{**SMALL, "total_steps": 128}), path)
    return path


def test_list_envs(capsys):
    assert main(["list-envs"]) == 0
    rows = [line.split("\t") for line in capsys.readouterr().out.splitlines()]
    ids = {r[0] for r in rows}
    assert {"doorkey-8x8", "empty-16x16", "redbluedoors-8x8", "unlockpickup", "keycorridor-s3r3"} <= ids
    assert {"empty-8x8", "doorkey-6x6"} <= {r[0] for r in rows if r[1] == "desk"}


def test_train_override_reaches_manifest(small_toml, tmp_path, capsys):
    out = tmp_path / "run"
    assert main(["train", "--config", str(small_toml), "seed=7", "--out", str(out)]) == 0
    man = json.loads((out / "manifest.json").read_text())
    assert man["seeds"] == [7] and man["config"]["seed"] == 7
    assert capsys.readouterr().out.strip().endswith("manifest.json")
    # the stored config reproduces the run
    again = tmp_path / "again"
    assert main(["train", "--config", str(out / "config.toml"), "--out", str(again)]) == 0
    assert (out / "metrics_seed7.csv").read_bytes() == (again / "metrics_seed7.csv").read_bytes()
    assert load_config(out / "config.toml").hash() == man["config_hash"]


def test_eval_and_analyze(small_toml, tmp_path, capsys):
    out = tmp_path / "run"
    assert main(["train", "--config", str(small_toml), "--out", str(out)]) == 0
    ck = json.loads((out / "manifest.json").read_text())["artifacts"]["0"]["checkpoints"][-1]
    capsys.readouterr()
    assert main(["eval", str(out / ck), "--env", "empty-8x8", "--episodes", "2"]) == 0
    res = json.loads(capsys.readouterr().out)
    assert set(res) == {"mean_return", "success_rate", "mean_length"}
    assert main(["analyze", str(out), "--out", str(tmp_path / "an"), "--no-images"]) == 0
    assert (tmp_path / "an" / "curves_empty-8x8.csv").exists()


def test_sweep_dry_run(small_toml, tmp_path, capsys):
    assert main(["sweep", "--config", str(small_toml), "--out", str(tmp_path / "sw"), "--dry-run"]) == 0
    lines = capsys.readouterr().out.splitlines()
    labels = [line.split("\t")[0] for line in lines]
    assert labels == ["icm_fixed_b0.1", "icm_fixed_b0.2", "icm_fixed_b0.5", "icm_fixed_b1", "icm_fixed_b2", "acwi",
                      "ppo"]
    assert len({line.split("\t")[1] for line in lines}) == 7
    assert not (tmp_path / "sw").exists()


def test_print_config(capsys):
    assert main(["train", "--print-config", "gamma=0.9"]) == 0
    assert "gamma = 0.9" in capsys.readouterr().out


def test_output_root_variable(monkeypatch, tmp_path):
    monkeypatch.setenv("ACWI_OUTPUT_ROOT", str(tmp_path))
    args = parse_args(["train", "output_dir=rel"])
    from acwi.cli import _resolve
    assert _resolve(args).output_dir == str(tmp_path / "rel")
    assert _resolve(parse_args(["train", "--out", "x"])).output_dir == "x"


@pytest.mark.parametrize("argv, code", [
    (["train", "nosuch=1"], 2),
    (["train", "--config", "/nonexistent.toml"], 2),
    (["frobnicate"], 2),
    (["eval", "/nonexistent", "--env", "empty-8x8"], 2),
    (["eval", "/nonexistent", "--env", "empty-8x8", "--episodes", "0"], 2),
    (["analyze", "/nonexistent"], 1),
])
def test_exit_codes(argv, code, capsys):
    assert main(argv) == code
    err = capsys.readouterr().err.strip().splitlines()
    assert len(err) == 1 and err[0].startswith("error: ")


def test_verbose_after_subcommand(small_toml, tmp_path):
    assert main(["-v", "train", "-v", "--config", str(small_toml), "--out", str(tmp_path / "r")]) == 0
    assert len(read_metrics(tmp_path / "r" / "metrics_seed0.csv")["iteration"]) == 2
