import dataclasses

import pytest

from acwi.config import SWEEP_BETAS, RunConfig, from_flat, load_config, parse_override, save_config
from acwi.errors import ConfigError

TABLE_DEFAULTS = {
    "gamma": 0.99, "gae_lambda": 0.95, "ppo_epochs": 4, "clip_eps": 0.2, "actor_lr": 3e-4, "critic_lr": 3e-4,
    "icm_lr": 1e-3, "icm_batch_size": 64, "alpha": 0.001, "beta_lr": 5e-4, "encoding_size": 256,
    "encoder_depth": 2, "beta_min": 0.1, "beta_max": 2.0, "lambda_reg": 1e-3, "beta_0": 1.0, "grad_clip": 1.0,
    "weight_decay": 1e-6, "fixed_betas": [0.1, 0.2, 0.5, 1.0, 2.0],
}


def test_defaults_match_hyperparameter_table():
    cfg = RunConfig()
    for key, value in TABLE_DEFAULTS.items():
        assert getattr(cfg, key) == value, key
    assert list(SWEEP_BETAS) == TABLE_DEFAULTS["fixed_betas"]
    marked = {f.name for f in dataclasses.fields(RunConfig) if f.metadata["published"]}
    assert marked == set(TABLE_DEFAULTS)


def test_reference_config_marks_artifact_defaults():
    text = RunConfig().to_toml()
    for line in text.splitlines():
        if "=" not in line:
            continue
        key = line.split("=")[0].strip()
        assert line.endswith("# artifact default") == (key not in TABLE_DEFAULTS), line


def test_toml_round_trip(tmp_path):
    cfg = RunConfig(env="doorkey-6x6", method="icm_fixed", fixed_beta=0.2, seed=3, hidden_sizes=[32, 32],
                    log_wallclock=False)
    save_config(cfg, tmp_path / "c.toml")
    back = load_config(tmp_path / "c.toml")
    assert back == cfg and back.hash() == cfg.hash()
    assert from_flat(cfg.to_dict()) == cfg


def test_overrides_win_over_file(tmp_path):
    save_config(RunConfig(seed=2, gamma=0.9), tmp_path / "c.toml")
    cfg = load_config(tmp_path / "c.toml", ["seed=7", "method=ppo", "hidden_sizes=[8, 8]", "log_wallclock=false"])
    assert (cfg.seed, cfg.gamma, cfg.method, cfg.hidden_sizes, cfg.log_wallclock) == (7, 0.9, "ppo", [8, 8], False)
    assert parse_override("env=doorkey-6x6") == ("env", "doorkey-6x6")


@pytest.mark.parametrize("bad", ["nosuchkey=1", "seed", "seed=1.5", "gamma=1.0", "method=dqn", "env=maze-9",
                                 "beta_min=1.5", "log_wallclock=maybe", "fixed_betas=[0.1, -1]",
                                 "minibatch_size=5000"])
def test_bad_overrides(bad):
    with pytest.raises(ConfigError):
        load_config(None, [bad])


def test_bad_files(tmp_path):
    (tmp_path / "a.toml").write_text("[ppo]\nalpha = 0.1\n")
    (tmp_path / "b.toml").write_text("[nope]\nx = 1\n")
    (tmp_path / "c.toml").write_text("[ppo\n")
    for name in ("a.toml", "b.toml", "c.toml", "missing.toml"):
        with pytest.raises(ConfigError):
            load_config(tmp_path / name)


def test_derived_quantities():
    cfg = RunConfig(num_envs=4, rollout_length=64, total_steps=10_000, seed=3, num_seeds=2)
    assert cfg.steps_per_iteration == 256 and cfg.iterations == 39 and cfg.seeds == [3, 4]
    assert RunConfig(method="icm_fixed", fixed_beta=0.5).method_label == "icm_fixed_b0.5"
