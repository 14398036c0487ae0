"""Run configuration: defaults, TOML I/O, overrides and hashing."""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import tomli
import tomli_w

from acwi.errors import ConfigError

METHODS = ("ppo", "icm_fixed", "acwi")
SWEEP_BETAS = (0.1, 0.2, 0.5, 1.0, 2.0)


def _f(default, section, published=False, **kw):
    return field(default=default, metadata={"section": section, "published": published, **kw})


def _lf(default, section, published=False):
    return field(default_factory=lambda: list(default), metadata={"section": section, "published": published})


@dataclass
class RunConfig:
    # environment
    env: str = _f("doorkey-8x8", "env")
    max_steps: int = _f(0, "env", help="0 keeps the environment's own limit")

    # experiment
    method: str = _f("acwi", "run")
    fixed_beta: float = _f(1.0, "run")
    seed: int = _f(0, "run")
    num_seeds: int = _f(5, "run")
    total_steps: int = _f(1_000_000, "run")
    num_envs: int = _f(8, "run")
    rollout_length: int = _f(128, "run")
    eval_every: int = _f(50, "run")
    eval_episodes: int = _f(10, "run")
    snapshot_every: int = _f(10, "run")
    snapshot_samples: int = _f(2048, "run")
    trace_steps: int = _f(50_000, "run")
    log_wallclock: bool = _f(True, "run")
    output_dir: str = _f("runs", "run")

    # PPO
    gamma: float = _f(0.99, "ppo", True)
    gae_lambda: float = _f(0.95, "ppo", True)
    ppo_epochs: int = _f(4, "ppo", True)
    clip_eps: float = _f(0.2, "ppo", True)
    actor_lr: float = _f(3e-4, "ppo", True)
    critic_lr: float = _f(3e-4, "ppo", True)
    minibatch_size: int = _f(256, "ppo")
    value_coef: float = _f(0.5, "ppo")
    entropy_coef: float = _f(0.01, "ppo")
    ppo_max_grad_norm: float = _f(0.5, "ppo")
    hidden_sizes: list = _lf((64, 64), "ppo")
    value_target: str = _f("gae", "ppo")

    # ICM
    icm_lr: float = _f(1e-3, "icm", True)
    icm_batch_size: int = _f(64, "icm", True)
    fixed_betas: list = _lf(SWEEP_BETAS, "icm", True)
    alpha: float = _f(0.001, "icm", True)
    icm_epochs: int = _f(4, "icm")
    alpha_forward: float = _f(0.2, "icm")
    alpha_inverse: float = _f(0.8, "icm")
    feature_dim: int = _f(256, "icm")
    icm_hidden: int = _f(256, "icm")
    icm_detach_target: bool = _f(False, "icm")
    icm_max_grad_norm: float = _f(1.0, "icm")
    intrinsic_eps: float = _f(1e-8, "icm")
    intrinsic_norm_scope: str = _f("rollout", "icm")

    # beta network and correlation objective
    beta_lr: float = _f(5e-4, "beta", True)
    encoding_size: int = _f(256, "beta", True)
    encoder_depth: int = _f(2, "beta", True)
    beta_min: float = _f(0.1, "beta", True)
    beta_max: float = _f(2.0, "beta", True)
    lambda_reg: float = _f(1e-3, "beta", True)
    beta_0: float = _f(1.0, "beta", True)
    grad_clip: float = _f(1.0, "beta", True)
    weight_decay: float = _f(1e-6, "beta", True)
    beta_head_hidden: int = _f(64, "beta")
    corr_eps: float = _f(1e-8, "beta")

    # analysis
    pca_source: str = _f("beta", "analysis")

    def __post_init__(self):
        self.validate()

    @property
    def seeds(self):
        return list(range(self.seed, self.seed + self.num_seeds))

    @property
    def steps_per_iteration(self):
        return self.num_envs * self.rollout_length

    @property
    def iterations(self):
        return self.total_steps // self.steps_per_iteration

    @property
    def method_label(self):
        if self.method == "icm_fixed":
            return f"icm_fixed_b{self.fixed_beta:g}"
        return self.method

    def validate(self):
        from acwi.envs import parse_env_id

        parse_env_id(self.env)
        if self.method not in METHODS:
            raise ConfigError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.method == "icm_fixed" and not self.fixed_beta > 0:
            raise ConfigError("icm_fixed needs a positive fixed_beta")
        if not 0 <= self.gamma < 1:
            raise ConfigError("gamma must lie in [0, 1)")
        if not 0 <= self.gae_lambda <= 1:
            raise ConfigError("gae_lambda must lie in [0, 1]")
        positive = ("actor_lr", "critic_lr", "icm_lr", "beta_lr", "clip_eps", "alpha", "lambda_reg",
                    "beta_0", "grad_clip", "intrinsic_eps", "corr_eps", "alpha_forward", "alpha_inverse")
        for name in positive:
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if self.weight_decay < 0 or self.value_coef < 0 or self.entropy_coef < 0:
            raise ConfigError("weight_decay, value_coef and entropy_coef must be >= 0")
        counts = ("num_seeds", "num_envs", "rollout_length", "minibatch_size", "icm_batch_size", "feature_dim",
                  "icm_hidden", "encoding_size", "encoder_depth", "beta_head_hidden", "eval_episodes",
                  "eval_every", "snapshot_every", "snapshot_samples")
        for name in counts:
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")
        if self.ppo_epochs < 0 or self.icm_epochs < 0 or self.total_steps < 0 or self.max_steps < 0:
            raise ConfigError("epochs, total_steps and max_steps must be >= 0")
        if self.seed < 0:
            raise ConfigError("seed must be >= 0")
        if not 0 < self.beta_min <= self.beta_0 <= self.beta_max:
            raise ConfigError("need 0 < beta_min <= beta_0 <= beta_max")
        if any(not b > 0 for b in self.fixed_betas):
            raise ConfigError("fixed_betas must be positive")
        if self.value_target not in ("gae", "extrinsic_return"):
            raise ConfigError("value_target must be 'gae' or 'extrinsic_return'")
        if self.intrinsic_norm_scope not in ("rollout", "minibatch"):
            raise ConfigError("intrinsic_norm_scope must be 'rollout' or 'minibatch'")
        if self.pca_source not in ("beta", "icm"):
            raise ConfigError("pca_source must be 'beta' or 'icm'")
        if self.minibatch_size > self.steps_per_iteration or self.icm_batch_size > self.steps_per_iteration:
            raise ConfigError("minibatch sizes cannot exceed num_envs * rollout_length")

    # --- serialization -------------------------------------------------

    def to_dict(self):
        return dataclasses.asdict(self)

    def hash(self):
        d = self.to_dict()
        d.pop("output_dir")
        blob = json.dumps(d, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def replace(self, **changes):
        return from_flat({**self.to_dict(), **changes})

    def to_toml(self, annotate=True):
        """Sectioned TOML; keys that are not published hyperparameters are marked."""
        lines = []
        by_section = {}
        for f in dataclasses.fields(self):
            by_section.setdefault(f.metadata["section"], []).append(f)
        for section, fs in by_section.items():
            lines.append(f"[{section}]")
            for f in fs:
                value = getattr(self, f.name)
                if isinstance(value, list):  # numeric lists, kept on one line
                    text = f"{f.name} = {json.dumps(value)}"
                else:
                    text = tomli_w.dumps({f.name: value}).strip()
                if annotate and not f.metadata["published"]:
                    text += "  # artifact default"
                lines.append(text)
            lines.append("")
        return "\n".join(lines)


_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}
SECTIONS = sorted({f.metadata["section"] for f in _FIELDS.values()})


def _coerce(name, value):
    f = _FIELDS[name]
    kind = f.type
    try:
        if kind == "bool":
            if isinstance(value, str):
                if value.lower() in ("true", "1", "yes"):
                    return True
                if value.lower() in ("false", "0", "no"):
                    return False
                raise ValueError(value)
            if not isinstance(value, bool):
                raise ValueError(value)
            return value
        if kind == "int":
            if isinstance(value, bool) or (isinstance(value, float) and not value.is_integer()):
                raise ValueError(value)
            return int(value)
        if kind == "float":
            if isinstance(value, bool):
                raise ValueError(value)
            return float(value)
        if kind == "list":
            if not isinstance(value, (list, tuple)):
                raise ValueError(value)
            return list(value)
        if not isinstance(value, str):
            raise ValueError(value)
        return value
    except (TypeError, ValueError):
        raise ConfigError(f"bad value for {name!r}: {value!r} (expected {kind})") from None


def from_flat(d):
    unknown = sorted(set(d) - set(_FIELDS))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    return RunConfig(**{k: _coerce(k, v) for k, v in d.items()})


def flatten(doc):
    flat = {}
    for key, value in doc.items():
        if isinstance(value, dict):
            if key not in SECTIONS:
                raise ConfigError(f"unknown config section [{key}]")
            for k, v in value.items():
                if k in flat:
                    raise ConfigError(f"duplicate key {k!r}")
                if k in _FIELDS and _FIELDS[k].metadata["section"] != key:
                    raise ConfigError(f"key {k!r} belongs in [{_FIELDS[k].metadata['section']}]")
                flat[k] = v
        else:
            flat[key] = value
    return flat


def parse_override(text):
    if "=" not in text:
        raise ConfigError(f"override must look like key=value, got {text!r}")
    key, raw = text.split("=", 1)
    key = key.strip()
    raw = raw.strip()
    if key not in _FIELDS:
        raise ConfigError(f"unknown config key {key!r}")
    try:
        value = tomli.loads(f"v = {raw}")["v"]
    except tomli.TOMLDecodeError:
        value = raw
    return key, value


def load_config(path=None, overrides=()):
    """Defaults <- file <- ``key=value`` overrides."""
    flat = {}
    if path is not None:
        try:
            with open(path, "rb") as fh:
                doc = tomli.load(fh)
        except OSError as e:
            raise ConfigError(f"cannot read config {path}: {e}") from None
        except tomli.TOMLDecodeError as e:
            raise ConfigError(f"{path}: {e}") from None
        flat.update(flatten(doc))
    for item in overrides:
        k, v = parse_override(item)
        flat[k] = v
    return from_flat(flat)


def save_config(cfg, path, annotate=True):
    Path(path).write_text(cfg.to_toml(annotate), encoding="utf-8")
    return path
