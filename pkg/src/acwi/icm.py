"""Intrinsic Curiosity Module: encoder, forward/inverse heads and rewards."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from acwi.errors import ConfigError, NumericError
from acwi.nn import Mlp, MlpSpec, OptimState, ParamSet, cross_entropy, one_hot, optimizer_step
from acwi.nn import tensor as T


@dataclass(frozen=True)
class IcmLossWeights:
    alpha_F: float = 0.2
    alpha_I: float = 0.8

    def __post_init__(self):
        if self.alpha_F < 0 or self.alpha_I < 0 or (self.alpha_F == 0 and self.alpha_I == 0):
            raise ConfigError("ICM loss weights must be >= 0 and not both zero")


@dataclass
class IcmNets:
    encoder: Mlp
    forward_head: Mlp
    inverse_head: Mlp
    params: ParamSet
    num_actions: int
    detach_target: bool = False

    @classmethod
    def create(cls, obs_dim, num_actions, rng, feature_dim=256, encoder_hidden=(256,), head_hidden=(256,),
               detach_target=False):
        params = ParamSet()
        enc = Mlp.create(MlpSpec(obs_dim, encoder_hidden, feature_dim, output_activation="tanh"),
                         params, rng, prefix="enc.")
        fwd = Mlp.create(MlpSpec(feature_dim + num_actions, head_hidden, feature_dim), params, rng, prefix="fwd.")
        inv = Mlp.create(MlpSpec(2 * feature_dim, head_hidden, num_actions), params, rng, prefix="inv.")
        return cls(enc, fwd, inv, params, num_actions, detach_target)

    def __post_init__(self):
        d = self.encoder.spec.output_dim
        if self.forward_head.spec.output_dim != d:
            raise ConfigError("forward head must predict the feature dimension")
        if self.forward_head.spec.input_dim != d + self.num_actions:
            raise ConfigError("forward head input must be feature + one-hot action")
        if self.inverse_head.spec.input_dim != 2 * d or self.inverse_head.spec.output_dim != self.num_actions:
            raise ConfigError("inverse head must map two features to action logits")

    @property
    def feature_dim(self):
        return self.encoder.spec.output_dim


def _check_batch(obs, actions, next_obs):
    obs = np.asarray(obs, dtype=np.float64)
    next_obs = np.asarray(next_obs, dtype=np.float64)
    actions = np.asarray(actions, dtype=np.int64)
    if len(obs) == 0:
        raise ConfigError("empty transition batch")
    if obs.shape != next_obs.shape or actions.shape != (len(obs),):
        raise ConfigError(f"inconsistent batch shapes {obs.shape}, {actions.shape}, {next_obs.shape}")
    return obs, actions, next_obs


def icm_loss(nets, obs, actions, next_obs, weights, return_parts=False):
    """alpha_F * mean(0.5 ||f(phi_t, a_t) - phi_t1||^2) + alpha_I * CE(inverse logits, a_t)."""
    obs, actions, next_obs = _check_batch(obs, actions, next_obs)
    n = len(obs)
    # one encoder pass over both ends of every transition
    feats = nets.encoder(np.concatenate([obs, next_obs], axis=0))
    phi = feats[0:n]
    phi_next = feats[n:2 * n]
    target = phi_next.detach() if nets.detach_target else phi_next

    pred = nets.forward_head(T.concat([phi, one_hot(actions, nets.num_actions)], axis=1))
    fwd = T.mean(T.sum_(T.square(pred - target), axis=1)) * 0.5
    inv = cross_entropy(nets.inverse_head(T.concat([phi, phi_next], axis=1)), actions)
    loss = fwd * weights.alpha_F + inv * weights.alpha_I
    if not np.isfinite(loss.item()):
        raise NumericError(f"non-finite ICM loss: {loss.item()}", value=loss.item())
    if return_parts:
        return loss, fwd.item(), inv.item()
    return loss


def raw_intrinsic(nets, obs, actions, next_obs):
    """Per-transition 0.5 ||f(phi_t, a_t) - phi_t1||^2, computed without a tape."""
    obs, actions, next_obs = _check_batch(obs, actions, next_obs)
    phi = nets.encoder.forward(obs)
    phi_next = nets.encoder.forward(next_obs)
    pred = nets.forward_head.forward(np.concatenate([phi, one_hot(actions, nets.num_actions)], axis=1))
    return 0.5 * np.sum((pred - phi_next) ** 2, axis=1)


@dataclass
class IntrinsicBatch:
    raw: np.ndarray
    rectified: np.ndarray
    batch_mean: float
    batch_std: float

    def stats(self):
        return {
            "intr_raw_mean": float(self.raw.mean()),
            "intr_raw_max": float(self.raw.max()),
            "intr_mean": float(self.rectified.mean()),
            "intr_zero_frac": float(np.mean(self.rectified == 0.0)),
        }


def rectify_normalize(raw, eps=1e-8):
    """max(0, (I - mean) / (std + eps)) with population statistics."""
    raw = np.asarray(raw, dtype=np.float64)
    if raw.size == 0:
        raise ConfigError("need at least one intrinsic value")
    mu = float(raw.mean())
    if np.all(raw == raw.flat[0]):
        # no spread: rounding in the mean would otherwise leak tiny positive bonuses
        return IntrinsicBatch(raw, np.zeros_like(raw), float(raw.flat[0]), 0.0)
    sigma = float(np.sqrt(np.mean((raw - mu) ** 2)))
    rect = np.maximum(0.0, (raw - mu) / (sigma + eps))
    return IntrinsicBatch(raw, rect, mu, sigma)


def rectify_normalize_chunked(raw, chunk, eps=1e-8):
    """Same as :func:`rectify_normalize` but with statistics per consecutive chunk."""
    raw = np.asarray(raw, dtype=np.float64)
    out = np.empty_like(raw)
    for i in range(0, len(raw), chunk):
        out[i:i + chunk] = rectify_normalize(raw[i:i + chunk], eps).rectified
    return IntrinsicBatch(raw, out, float(raw.mean()), float(raw.std()))


def icm_update(nets, opt, obs, actions, next_obs, weights, epochs, minibatch_size, rng, max_grad_norm=None):
    """Shuffled minibatch epochs; returns the mean loss of each epoch."""
    obs, actions, next_obs = _check_batch(obs, actions, next_obs)
    n = len(obs)
    if minibatch_size > n:
        raise ConfigError(f"minibatch_size {minibatch_size} exceeds batch size {n}")
    trace = []
    for _ in range(epochs):
        perm = rng.permutation(n)
        losses = []
        for start in range(0, n - minibatch_size + 1, minibatch_size):
            idx = perm[start:start + minibatch_size]
            loss = icm_loss(nets, obs[idx], actions[idx], next_obs[idx], weights)
            loss.backward()
            optimizer_step(nets.params, opt, max_grad_norm)
            losses.append(loss.item())
        trace.append(float(np.mean(losses)))
    return trace


def make_icm_optimizer(nets, lr, weight_decay=0.0):
    return OptimState.for_params(nets.params, lr, weight_decay=weight_decay)
