"""Training loop: rollouts, ICM, beta update, reward augmentation, GAE, PPO.

One :class:`Trainer` owns the networks, optimizers, environments and RNG
streams for a single seed. :func:`run_experiment` drives one trainer per
seed and writes metrics, logs, traces, snapshots and checkpoints.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from acwi import kernels
from acwi.beta_net import BetaNet, beta_forward, beta_stats, beta_update, make_beta_optimizer
from acwi.config import RunConfig
from acwi.envs import NUM_ACTIONS, OBS_DIM, make_env, obs_vector, observe, parse_env_id, reset, step
from acwi.envs.layouts import generate
from acwi.envs.traces import TraceWriter
from acwi.errors import AcwiError, ConfigError
from acwi.icm import IcmLossWeights, IcmNets, icm_update, make_icm_optimizer, raw_intrinsic, rectify_normalize, \
    rectify_normalize_chunked
from acwi.nn import Mlp, MlpSpec, OptimState, ParamSet, load_arrays, save_arrays
from acwi.ppo import ActorCritic, PpoOptimizers, augment_rewards, compute_gae, normalize_advantages, \
    ppo_update, sample_actions

log = logging.getLogger(__name__)

METRICS_HEADER = ("iteration", "env_steps", "ep_return_mean", "ep_return_std", "ep_len_mean", "l_icm", "l_corr",
                  "l_reg", "beta_mean", "beta_std", "intr_mean", "clip_frac", "entropy", "wallclock_s")

STAGES = ("collect", "icm_update", "intrinsic", "ext_return", "beta_update", "augment", "gae", "ppo_update")


class StageError(AcwiError):
    def __init__(self, stage, iteration, cause):
        super().__init__(f"iteration {iteration}, stage {stage!r}: {type(cause).__name__}: {cause}")
        self.stage = stage
        self.iteration = iteration
        self.cause = cause


@dataclass
class IterationRecord:
    iteration: int
    env_steps: int
    ep_return_mean: float
    ep_return_std: float
    ep_len_mean: float
    episodes: int
    l_icm: float = math.nan
    l_corr: float = math.nan
    l_reg: float = math.nan
    beta_mean: float = math.nan
    beta_std: float = math.nan
    intr_mean: float = math.nan
    clip_frac: float = math.nan
    entropy: float = math.nan
    policy_loss: float = math.nan
    value_loss: float = math.nan
    wallclock_s: float = 0.0
    extra: dict = field(default_factory=dict)

    def csv_row(self):
        return [_fmt(getattr(self, k)) for k in METRICS_HEADER]


def _fmt(x):
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x) + 0.0, ".12g")


@dataclass
class Rollout:
    obs: np.ndarray            # [T, N, D] network inputs
    obs_codes: np.ndarray      # [T, N, 147] raw integer views
    next_obs: np.ndarray       # [T, N, D] successor observation (pre-reset)
    actions: np.ndarray
    log_probs: np.ndarray
    rewards: np.ndarray
    values: np.ndarray
    terminated: np.ndarray
    truncated: np.ndarray
    final_values: np.ndarray
    bootstrap: np.ndarray
    intrinsic: np.ndarray = None
    raw_intrinsic: np.ndarray = None
    ext_returns: np.ndarray = None
    betas: np.ndarray = None
    aug_rewards: np.ndarray = None
    advantages: np.ndarray = None
    targets: np.ndarray = None

    @property
    def flat_obs(self):
        return self.obs.reshape(-1, self.obs.shape[-1])

    @property
    def flat_next_obs(self):
        return self.next_obs.reshape(-1, self.next_obs.shape[-1])


class Trainer:
    def __init__(self, cfg, seed, audit=False, trace_path=None):
        self.cfg = cfg
        self.seed = int(seed)
        self.audit = audit
        self.env_name, self.env_size = parse_env_id(cfg.env)
        streams = np.random.SeedSequence(self.seed).spawn(7)
        ac_rng, icm_init, beta_init, self.sample_rng, self.ppo_rng, self.icm_rng, _ = (
            np.random.default_rng(s) for s in streams
        )
        self.ac = ActorCritic.create(OBS_DIM, NUM_ACTIONS, ac_rng, tuple(cfg.hidden_sizes))
        self.ppo_opts = PpoOptimizers.create(self.ac, cfg.actor_lr, cfg.critic_lr)

        self.icm = self.icm_opt = None
        self.beta_net = self.beta_opt = None
        if cfg.method != "ppo":
            self.icm = IcmNets.create(OBS_DIM, NUM_ACTIONS, icm_init, feature_dim=cfg.feature_dim,
                                      encoder_hidden=(cfg.icm_hidden,), head_hidden=(cfg.icm_hidden,),
                                      detach_target=cfg.icm_detach_target)
            self.icm_opt = make_icm_optimizer(self.icm, cfg.icm_lr)
            self.icm_weights = IcmLossWeights(cfg.alpha_forward, cfg.alpha_inverse)
        if cfg.method == "acwi":
            self.beta_net = BetaNet.create(OBS_DIM, beta_init, cfg.encoding_size, cfg.encoder_depth,
                                           cfg.beta_head_hidden, cfg.beta_min, cfg.beta_max, cfg.beta_0)
            self.beta_opt = make_beta_optimizer(self.beta_net, cfg.beta_lr, cfg.weight_decay)

        self.envs = []
        self.episode_counter = []
        for i in range(cfg.num_envs):
            st = make_env(self.env_name, self.env_size, seed=self.env_seed(i))
            if cfg.max_steps:
                st.max_steps = cfg.max_steps
            self.envs.append(st)
            self.episode_counter.append(0)
        self.obs = np.stack([obs_vector(observe(e)) for e in self.envs])
        self.ep_return = np.zeros(cfg.num_envs)
        self.ep_len = np.zeros(cfg.num_envs, dtype=np.int64)
        self.iteration = 0
        self.env_steps = 0
        self.events = []
        self.last_rollout = None
        self.trace = TraceWriter(trace_path, cfg.trace_steps) if trace_path else None

    def env_seed(self, i):
        return self.seed * 10_007 + i

    # --- parameter bookkeeping --------------------------------------------

    def param_sets(self):
        out = {"policy": self.ac.policy_params, "value": self.ac.value_params}
        if self.icm is not None:
            out["icm"] = self.icm.params
        if self.beta_net is not None:
            out["beta"] = self.beta_net.params
        return out

    def checksums(self):
        return {k: p.checksum() for k, p in self.param_sets().items()}

    def _event(self, stage):
        ev = {"iteration": self.iteration, "stage": stage}
        if self.audit:
            ev["checksums"] = self.checksums()
        self.events.append(ev)

    # --- stages ------------------------------------------------------------

    def _reset_env(self, i):
        self.episode_counter[i] += 1
        st = self.envs[i]
        view = reset(st, self.episode_counter[i])
        if self.cfg.max_steps:
            st.max_steps = self.cfg.max_steps
        return view

    def collect(self):
        cfg = self.cfg
        T, N = cfg.rollout_length, cfg.num_envs
        obs = np.zeros((T, N, OBS_DIM))
        codes = np.zeros((T, N, OBS_DIM), dtype=np.uint8)
        next_obs = np.zeros((T, N, OBS_DIM))
        actions = np.zeros((T, N), dtype=np.int64)
        log_probs = np.zeros((T, N))
        rewards = np.zeros((T, N))
        values = np.zeros((T, N))
        terminated = np.zeros((T, N))
        truncated = np.zeros((T, N))
        finished = []
        cur_codes = np.stack([observe(e).reshape(-1) for e in self.envs])
        for t in range(T):
            x = self.obs
            logits = self.ac.policy.forward(x)
            z = logits - logits.max(axis=1, keepdims=True)
            lp = z - np.log(np.exp(z).sum(axis=1, keepdims=True))
            a = sample_actions(np.exp(lp), self.sample_rng)
            obs[t] = x
            codes[t] = cur_codes
            actions[t] = a
            log_probs[t] = lp[np.arange(N), a]
            values[t] = self.ac.values(x)
            for i, env in enumerate(self.envs):
                res = step(env, a[i])
                nxt = obs_vector(res.obs)
                next_obs[t, i] = nxt
                rewards[t, i] = res.reward
                terminated[t, i] = res.terminated
                truncated[t, i] = res.truncated
                self.ep_return[i] += res.reward
                self.ep_len[i] += 1
                if self.trace is not None:
                    self.trace.write(self.env_steps + t * N + i, i, env.episode_index, env.step_count,
                                     env.agent_pos, a[i], res.reward, res.terminated or res.truncated)
                if res.terminated or res.truncated:
                    finished.append((self.ep_return[i], self.ep_len[i], res.terminated and res.reward > 0))
                    self.ep_return[i] = 0.0
                    self.ep_len[i] = 0
                    view = self._reset_env(i)
                    self.obs[i] = obs_vector(view)
                    cur_codes[i] = view.reshape(-1)
                else:
                    self.obs[i] = nxt
                    cur_codes[i] = res.obs.reshape(-1)
        final_values = np.zeros((T, N))
        mask = truncated > 0
        if mask.any():
            final_values[mask] = self.ac.values(next_obs[mask])
        bootstrap = self.ac.values(self.obs)
        self.env_steps += T * N
        self._finished = finished
        return Rollout(obs, codes, next_obs, actions, log_probs, rewards, values, terminated, truncated,
                       final_values, bootstrap)

    def update_icm(self, ro):
        cfg = self.cfg
        trace = icm_update(self.icm, self.icm_opt, ro.flat_obs, ro.actions.reshape(-1), ro.flat_next_obs,
                           self.icm_weights, cfg.icm_epochs, cfg.icm_batch_size, self.icm_rng,
                           cfg.icm_max_grad_norm)
        return float(trace[-1]) if trace else math.nan

    def compute_intrinsic(self, ro):
        cfg = self.cfg
        raw = raw_intrinsic(self.icm, ro.flat_obs, ro.actions.reshape(-1), ro.flat_next_obs)
        if cfg.intrinsic_norm_scope == "rollout":
            batch = rectify_normalize(raw, cfg.intrinsic_eps)
        else:
            batch = rectify_normalize_chunked(raw, cfg.icm_batch_size, cfg.intrinsic_eps)
        ro.raw_intrinsic = raw.reshape(ro.rewards.shape)
        ro.intrinsic = batch.rectified.reshape(ro.rewards.shape)
        return batch.stats()

    def compute_ext_returns(self, ro):
        ends = np.maximum(ro.terminated, ro.truncated)
        ro.ext_returns = kernels.discounted_returns(ro.rewards, ends, self.cfg.gamma)

    def update_beta(self, ro):
        cfg = self.cfg
        return beta_update(self.beta_net, self.beta_opt, ro.flat_obs, ro.intrinsic.reshape(-1),
                           ro.ext_returns.reshape(-1), cfg.lambda_reg, cfg.grad_clip, cfg.corr_eps)

    def augment(self, ro):
        cfg = self.cfg
        if cfg.method == "ppo":
            ro.betas = None
            ro.aug_rewards = ro.rewards.copy()
            return
        if cfg.method == "icm_fixed":
            ro.betas = np.full(ro.rewards.shape, cfg.fixed_beta)
        else:
            ro.betas = beta_forward(self.beta_net, ro.flat_obs).reshape(ro.rewards.shape)
        ro.aug_rewards = augment_rewards(ro.rewards, cfg.alpha, ro.betas, ro.intrinsic)

    def compute_advantages(self, ro):
        cfg = self.cfg
        adv, targets = compute_gae(ro.aug_rewards, ro.values, ro.terminated, cfg.gamma, cfg.gae_lambda,
                                   ro.bootstrap, ro.truncated, ro.final_values)
        ro.advantages = adv
        ro.targets = targets if cfg.value_target == "gae" else ro.ext_returns

    def update_policy(self, ro):
        cfg = self.cfg
        batch = {
            "obs": ro.flat_obs,
            "actions": ro.actions.reshape(-1),
            "log_probs": ro.log_probs.reshape(-1),
            "advantages": normalize_advantages(ro.advantages.reshape(-1)),
            "targets": ro.targets.reshape(-1),
        }
        return ppo_update(self.ac, self.ppo_opts, batch, cfg.ppo_epochs, cfg.minibatch_size, self.ppo_rng,
                          cfg.clip_eps, cfg.value_coef, cfg.entropy_coef, cfg.ppo_max_grad_norm)

    # --- one iteration -------------------------------------------------------

    def _run(self, stage, fn, *args):
        try:
            out = fn(*args)
        except AcwiError as e:
            if isinstance(e, StageError):
                raise
            raise StageError(stage, self.iteration, e) from e
        except (ValueError, ArithmeticError, FloatingPointError) as e:
            raise StageError(stage, self.iteration, e) from e
        self._event(stage)
        return out

    def run_iteration(self):
        t0 = time.perf_counter()
        cfg = self.cfg
        ro = self._run("collect", self.collect)
        rec_extra = {}
        l_icm = l_corr = l_reg = math.nan
        if cfg.method != "ppo":
            l_icm = self._run("icm_update", self.update_icm, ro)
            rec_extra.update(self._run("intrinsic", self.compute_intrinsic, ro))
        self._run("ext_return", self.compute_ext_returns, ro)
        if cfg.method == "acwi":
            out = self._run("beta_update", self.update_beta, ro)
            l_corr, l_reg = out["l_corr"], out["l_reg"]
        self._run("augment", self.augment, ro)
        self._run("gae", self.compute_advantages, ro)
        trace = self._run("ppo_update", self.update_policy, ro)

        rets = np.array([f[0] for f in self._finished])
        lens = np.array([f[1] for f in self._finished])
        rec = IterationRecord(
            iteration=self.iteration,
            env_steps=self.env_steps,
            ep_return_mean=float(rets.mean()) if len(rets) else math.nan,
            ep_return_std=float(rets.std()) if len(rets) else math.nan,
            ep_len_mean=float(lens.mean()) if len(lens) else math.nan,
            episodes=len(rets),
            l_icm=l_icm,
            l_corr=l_corr,
            l_reg=l_reg,
            clip_frac=trace["clip_frac"][-1] if trace["clip_frac"] else math.nan,
            entropy=trace["entropy"][-1] if trace["entropy"] else math.nan,
            policy_loss=trace["policy"][-1] if trace["policy"] else math.nan,
            value_loss=trace["value"][-1] if trace["value"] else math.nan,
        )
        if ro.betas is not None:
            rec.beta_mean = float(ro.betas.mean())
            rec.beta_std = float(ro.betas.std())
            if self.beta_net is not None:
                rec_extra.update(beta_stats(self.beta_net, ro.betas))
        if ro.intrinsic is not None:
            rec.intr_mean = float(ro.intrinsic.mean())
        rec_extra["success_rate"] = float(np.mean([f[2] for f in self._finished])) if self._finished else math.nan
        rec.extra = rec_extra
        rec.wallclock_s = time.perf_counter() - t0 if cfg.log_wallclock else 0.0
        self.last_rollout = ro
        self.iteration += 1
        return rec

    # --- checkpoints -----------------------------------------------------------

    def save_checkpoint(self, path):
        path = Path(path)
        path.mkdir(parents=True, exist_ok=True)
        save_arrays(path / "policy.params", self.ac.policy_params.state_dict())
        save_arrays(path / "value.params", self.ac.value_params.state_dict())
        save_arrays(path / "opt_policy.params", self.ppo_opts.actor.to_arrays())
        save_arrays(path / "opt_value.params", self.ppo_opts.critic.to_arrays())
        if self.icm is not None:
            save_arrays(path / "icm.params", self.icm.params.state_dict())
            save_arrays(path / "opt_icm.params", self.icm_opt.to_arrays())
        if self.beta_net is not None:
            save_arrays(path / "beta.params", self.beta_net.params.state_dict())
            save_arrays(path / "opt_beta.params", self.beta_opt.to_arrays())
        state = {
            "config": self.cfg.to_dict(),
            "seed": self.seed,
            "iteration": self.iteration,
            "env_steps": self.env_steps,
            "episode_counter": self.episode_counter,
            "ep_return": self.ep_return.tolist(),
            "ep_len": self.ep_len.tolist(),
            "envs": [e.to_dict() for e in self.envs],
            "rng": {k: getattr(self, k).bit_generator.state
                    for k in ("sample_rng", "ppo_rng", "icm_rng")},
        }
        (path / "state.json").write_text(json.dumps(state), encoding="utf-8")
        return path

    def load_checkpoint(self, path):
        from acwi.envs import GridState

        path = Path(path)
        state = json.loads((path / "state.json").read_text(encoding="utf-8"))
        self.ac.policy_params.load_state_dict(load_arrays(path / "policy.params"))
        self.ac.value_params.load_state_dict(load_arrays(path / "value.params"))
        self.ppo_opts.actor = OptimState.from_arrays(load_arrays(path / "opt_policy.params"))
        self.ppo_opts.critic = OptimState.from_arrays(load_arrays(path / "opt_value.params"))
        if self.icm is not None:
            self.icm.params.load_state_dict(load_arrays(path / "icm.params"))
            self.icm_opt = OptimState.from_arrays(load_arrays(path / "opt_icm.params"))
        if self.beta_net is not None:
            self.beta_net.params.load_state_dict(load_arrays(path / "beta.params"))
            self.beta_opt = OptimState.from_arrays(load_arrays(path / "opt_beta.params"))
        self.iteration = state["iteration"]
        self.env_steps = state["env_steps"]
        self.episode_counter = list(state["episode_counter"])
        self.ep_return = np.array(state["ep_return"], dtype=np.float64)
        self.ep_len = np.array(state["ep_len"], dtype=np.int64)
        self.envs = [GridState.from_dict(d) for d in state["envs"]]
        self.obs = np.stack([obs_vector(observe(e)) for e in self.envs])
        for k, st in state["rng"].items():
            getattr(self, k).bit_generator.state = st
        return self

    def close(self):
        if self.trace is not None:
            self.trace.close()


# --- evaluation ------------------------------------------------------------------

def _policy_from_params(arrays):
    names = sorted(k for k in arrays if k.startswith("pi.W"))
    dims = [arrays[n].shape for n in sorted(names, key=lambda n: int(n[4:]))]
    spec = MlpSpec(dims[0][0], tuple(d[1] for d in dims[:-1]), dims[-1][1])
    params = ParamSet()
    for k, v in arrays.items():
        params.add(k, v)
    return Mlp(spec, params, "pi.")


def load_policy(checkpoint):
    """Policy network from a checkpoint directory or ``policy.params`` file."""
    path = Path(checkpoint)
    if path.is_dir():
        path = path / "policy.params"
    try:
        arrays = load_arrays(path)
        policy = _policy_from_params(arrays)
    except (OSError, KeyError, IndexError, ValueError) as e:
        raise ConfigError(f"cannot load policy from {checkpoint}: {e}") from None
    if policy.spec.input_dim != OBS_DIM or policy.spec.output_dim != NUM_ACTIONS:
        raise ConfigError(f"checkpoint policy shape {policy.spec} does not fit the environment")
    return policy


def evaluate_policy(checkpoint, env, episodes=10, seed=0):
    """Greedy (argmax) evaluation on layouts ``(seed, 0..episodes-1)``.

    ``checkpoint`` may be a checkpoint path, an :class:`ActorCritic`, an
    :class:`Mlp` policy, or a callable ``(state, obs_view) -> action``.
    """
    if isinstance(checkpoint, (str, Path)):
        policy = load_policy(checkpoint)
    elif isinstance(checkpoint, ActorCritic):
        policy = checkpoint.policy
    else:
        policy = checkpoint
    name, size = parse_env_id(env) if isinstance(env, str) else env
    returns, lengths, successes = [], [], []
    for ep in range(episodes):
        st = generate(name, size, seed, ep)
        view = observe(st)
        total = 0.0
        while True:
            if isinstance(policy, Mlp):
                action = int(np.argmax(policy.forward(obs_vector(view)[None, :])[0]))
            else:
                action = int(policy(st, view))
            res = step(st, action)
            total += res.reward
            view = res.obs
            if res.terminated or res.truncated:
                break
        returns.append(total)
        lengths.append(st.step_count)
        successes.append(res.terminated and res.reward > 0)
    return {
        "mean_return": float(np.mean(returns)),
        "success_rate": float(np.mean(successes)),
        "mean_length": float(np.mean(lengths)),
    }


# --- experiments -----------------------------------------------------------------------

def _write_snapshot(path, trainer, ro, rec):
    betas = ro.betas.reshape(-1)
    codes = ro.obs_codes.reshape(-1, OBS_DIM)
    n = min(trainer.cfg.snapshot_samples, len(betas))
    idx = np.linspace(0, len(betas) - 1, n).astype(np.int64) if n < len(betas) else np.arange(len(betas))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["iteration", "env_steps", "obs_hash", "beta", "obs_hex"])
        for i in idx:
            raw = codes[i].tobytes()
            w.writerow([rec.iteration, rec.env_steps, hashlib.sha1(raw).hexdigest()[:16],
                        _fmt(betas[i]), raw.hex()])


def train_seed(cfg, seed, out_dir, audit=False, iterations=None, progress=None):
    """Train one seed, writing its artifacts into ``out_dir``; returns paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {
        "metrics": out_dir / f"metrics_seed{seed}.csv",
        "log": out_dir / f"log_seed{seed}.jsonl",
        "trace": out_dir / f"trace_seed{seed}.jsonl",
        "eval": out_dir / f"eval_seed{seed}.csv",
        "snapshots": [],
        "checkpoints": [],
    }
    n_iter = cfg.iterations if iterations is None else iterations
    trainer = Trainer(cfg, seed, audit=audit, trace_path=paths["trace"])
    try:
        with open(paths["metrics"], "w", newline="", encoding="utf-8") as mf, \
                open(paths["log"], "w", encoding="utf-8") as lf, \
                open(paths["eval"], "w", newline="", encoding="utf-8") as ef:
            mw = csv.writer(mf, lineterminator="\n")
            mw.writerow(METRICS_HEADER)
            ew = csv.writer(ef, lineterminator="\n")
            ew.writerow(["iteration", "env_steps", "mean_return", "success_rate", "mean_length"])
            for it in range(n_iter):
                rec = trainer.run_iteration()
                mw.writerow(rec.csv_row())
                mf.flush()
                d = asdict(rec)
                if not cfg.log_wallclock:
                    d.pop("wallclock_s")
                lf.write(json.dumps(d, sort_keys=True, default=float) + "\n")
                last = it == n_iter - 1
                if trainer.beta_net is not None and (rec.iteration % cfg.snapshot_every == 0 or last):
                    snap = out_dir / f"beta_seed{seed}_iter{rec.iteration:06d}.csv"
                    _write_snapshot(snap, trainer, trainer.last_rollout, rec)
                    paths["snapshots"].append(snap)
                if (rec.iteration + 1) % cfg.eval_every == 0 or last:
                    ck = trainer.save_checkpoint(out_dir / "checkpoints" / f"seed{seed}_iter{rec.iteration:06d}")
                    paths["checkpoints"].append(ck)
                    ev = evaluate_policy(trainer.ac, cfg.env, cfg.eval_episodes, seed=1_000_000 + seed)
                    ew.writerow([rec.iteration, rec.env_steps, _fmt(ev["mean_return"]),
                                 _fmt(ev["success_rate"]), _fmt(ev["mean_length"])])
                    ef.flush()
                if progress is not None:
                    progress(seed, rec)
    finally:
        trainer.close()
    return paths


def run_experiment(cfg, audit=False, progress=None):
    """Train every seed in ``cfg`` and write ``manifest.json``; returns the manifest dict."""
    out_dir = Path(cfg.output_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ConfigError(f"cannot create output directory {out_dir}: {e}") from None
    artifacts = {}
    for seed in cfg.seeds:
        log.info("training %s on %s, seed %d", cfg.method_label, cfg.env, seed)
        try:
            paths = train_seed(cfg, seed, out_dir, audit=audit, progress=progress)
        except OSError as e:
            raise AcwiError(f"I/O failure under {out_dir}: {e}") from e
        artifacts[str(seed)] = {
            k: ([str(p.relative_to(out_dir)) for p in v] if isinstance(v, list) else str(v.relative_to(out_dir)))
            for k, v in paths.items()
        }
    manifest = {
        "config": cfg.to_dict(),
        "config_hash": cfg.hash(),
        "method": cfg.method_label,
        "env": cfg.env,
        "seeds": cfg.seeds,
        "iterations": cfg.iterations,
        "kernel_backend": kernels.BACKEND,
        "artifacts": artifacts,
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2), encoding="utf-8")
    return manifest


def read_metrics(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    rows = list(csv.DictReader(io.StringIO(text)))
    return {k: np.array([float(r[k]) for r in rows]) for k in METRICS_HEADER}
