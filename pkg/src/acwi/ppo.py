"""Actor-critic networks, reward augmentation, GAE and the clipped PPO update."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from acwi import kernels
from acwi.errors import ConfigError, NumericError, UsageError
from acwi.nn import Mlp, MlpSpec, OptimState, ParamSet, optimizer_step
from acwi.nn import tensor as T
from acwi.nn.functional import categorical_entropy


@dataclass
class ActorCritic:
    policy: Mlp
    value: Mlp
    policy_params: ParamSet
    value_params: ParamSet

    @classmethod
    def create(cls, obs_dim, num_actions, rng, hidden=(64, 64)):
        pp, vp = ParamSet(), ParamSet()
        # the policy emits logits; softmax is applied where probabilities are needed
        policy = Mlp.create(MlpSpec(obs_dim, hidden, num_actions), pp, rng, prefix="pi.", out_gain=0.01)
        value = Mlp.create(MlpSpec(obs_dim, hidden, 1), vp, rng, prefix="v.", out_gain=1.0)
        return cls(policy, value, pp, vp)

    @property
    def num_actions(self):
        return self.policy.spec.output_dim

    def probs(self, obs):
        logits = self.policy.forward(obs)
        z = logits - logits.max(axis=1, keepdims=True)
        e = np.exp(z)
        return e / e.sum(axis=1, keepdims=True)

    def values(self, obs):
        return self.value.forward(obs)[:, 0]

    def log_probs_t(self, obs):
        return T.log_softmax(self.policy(obs))


def sample_actions(probs, rng):
    """Inverse-CDF sampling, one uniform draw per row."""
    u = rng.random(len(probs))
    cdf = np.cumsum(probs, axis=1)
    cdf[:, -1] = 1.0
    return (u[:, None] > cdf).sum(axis=1).astype(np.int64)


def augment_rewards(extrinsic, alpha, betas, intrinsic):
    """R^E + alpha * beta(s) * I+ elementwise."""
    extrinsic = np.asarray(extrinsic, dtype=np.float64)
    betas = np.broadcast_to(np.asarray(betas, dtype=np.float64), extrinsic.shape) if np.ndim(betas) == 0 \
        else np.asarray(betas, dtype=np.float64)
    intrinsic = np.asarray(intrinsic, dtype=np.float64)
    if extrinsic.shape != betas.shape or extrinsic.shape != intrinsic.shape:
        raise UsageError(f"length mismatch: {extrinsic.shape}, {betas.shape}, {intrinsic.shape}")
    return extrinsic + alpha * betas * intrinsic


def compute_gae(rewards, values, dones, gamma, lam, bootstrap_value=0.0, truncated=None, final_values=None):
    """Generalized advantage estimation along time (axis 0).

    ``dones`` marks terminated steps (successor value 0). ``truncated`` marks
    time-limit ends, which bootstrap from ``final_values`` (the value of the
    last observation of that episode). Both cut the lambda-chain. The step
    after the final row bootstraps from ``bootstrap_value``.
    Returns ``(advantages, targets)`` with ``targets = advantages + values``.
    """
    rewards = np.asarray(rewards, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    dones = np.asarray(dones, dtype=np.float64)
    if rewards.shape != values.shape or rewards.shape != dones.shape:
        raise ConfigError("rewards, values and dones must be aligned")
    trunc = np.zeros_like(dones) if truncated is None else np.asarray(truncated, dtype=np.float64)
    next_values = np.empty_like(values)
    next_values[:-1] = values[1:]
    next_values[-1] = bootstrap_value
    if truncated is not None:
        fv = np.asarray(final_values, dtype=np.float64)
        next_values = np.where(trunc > 0, fv, next_values)
    next_values = np.where(dones > 0, 0.0, next_values)
    ends = np.maximum(dones, trunc)
    adv = kernels.gae(rewards, values, next_values, ends, gamma, lam)
    return adv, adv + values


def normalize_advantages(adv, eps=1e-8):
    adv = np.asarray(adv, dtype=np.float64)
    centred = adv - adv.mean()
    centred -= centred.mean()  # second pass removes the rounding left in the first mean
    return centred / (np.sqrt(np.mean(centred * centred)) + eps)


def ppo_losses(ac, obs, actions, old_log_probs, advantages, targets, clip_eps=0.2, c_v=0.5, c_e=0.01):
    """Clipped surrogate, squared-error value loss and policy entropy.

    Returns a dict of taped scalars (``total``, ``policy``, ``value``,
    ``entropy``) plus the numeric ``clip_frac``.
    """
    actions = np.asarray(actions, dtype=np.int64)
    advantages = np.asarray(advantages, dtype=np.float64)
    log_probs = ac.log_probs_t(obs)
    new_lp = T.pick(log_probs, actions)
    ratio = T.exp(new_lp - np.asarray(old_log_probs, dtype=np.float64))
    if not np.all(np.isfinite(ratio.data)):
        raise NumericError("non-finite importance ratio")
    surr1 = ratio * advantages
    surr2 = T.clamp(ratio, 1.0 - clip_eps, 1.0 + clip_eps) * advantages
    policy_loss = -T.mean(T.minimum(surr1, surr2))
    v = ac.value(obs)[:, 0]
    value_loss = T.mean(T.square(v - np.asarray(targets, dtype=np.float64)))
    entropy = T.mean(categorical_entropy(log_probs))
    total = policy_loss + value_loss * c_v - entropy * c_e
    clip_frac = float(np.mean(np.abs(ratio.data - 1.0) > clip_eps))
    return {"total": total, "policy": policy_loss, "value": value_loss, "entropy": entropy,
            "clip_frac": clip_frac}


@dataclass
class PpoOptimizers:
    actor: OptimState
    critic: OptimState

    @classmethod
    def create(cls, ac, actor_lr=3e-4, critic_lr=3e-4):
        return cls(OptimState.for_params(ac.policy_params, actor_lr),
                   OptimState.for_params(ac.value_params, critic_lr))


def ppo_update(ac, opts, batch, epochs, minibatch_size, rng, clip_eps=0.2, c_v=0.5, c_e=0.01,
               max_grad_norm=0.5):
    """K epochs of shuffled minibatch updates over a prepared batch.

    ``batch`` maps ``obs``, ``actions``, ``log_probs``, ``advantages`` (already
    normalized) and ``targets`` to aligned arrays. Returns per-epoch means.
    """
    obs = batch["obs"]
    n = len(obs)
    if minibatch_size > n:
        raise ConfigError(f"minibatch_size {minibatch_size} exceeds batch size {n}")
    keys = ("policy", "value", "entropy", "clip_frac")
    trace = {k: [] for k in keys}
    for _ in range(epochs):
        perm = rng.permutation(n)
        acc = {k: [] for k in keys}
        for start in range(0, n - minibatch_size + 1, minibatch_size):
            idx = perm[start:start + minibatch_size]
            out = ppo_losses(ac, obs[idx], batch["actions"][idx], batch["log_probs"][idx],
                             batch["advantages"][idx], batch["targets"][idx], clip_eps, c_v, c_e)
            out["total"].backward()
            optimizer_step(ac.policy_params, opts.actor, max_grad_norm)
            optimizer_step(ac.value_params, opts.critic, max_grad_norm)
            for k in keys:
                v = out[k]
                acc[k].append(v if isinstance(v, float) else v.item())
        for k in keys:
            trace[k].append(float(np.mean(acc[k])))
    return trace
