"""State-dependent intrinsic scaling trained with a correlation objective.

The network maps an observation to a log-factor clamped to
``[log beta_min, log beta_max]``; ``beta = exp(log-factor)``. Its loss is the
negative standardized covariance between ``beta(s) * I+`` and the discounted
extrinsic return, plus a log-space pull toward ``beta_0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from acwi.errors import ConfigError, NumericError
from acwi.nn import Mlp, MlpSpec, OptimState, ParamSet, optimizer_step, zscore, zscore_t
from acwi.nn import tensor as T


@dataclass
class BetaNet:
    encoder: Mlp
    head: Mlp
    params: ParamSet
    beta_min: float = 0.1
    beta_max: float = 2.0
    beta_0: float = 1.0

    @classmethod
    def create(cls, obs_dim, rng, encoding_size=256, depth=2, head_hidden=64,
               beta_min=0.1, beta_max=2.0, beta_0=1.0):
        if not 0 < beta_min <= beta_0 <= beta_max:
            raise ConfigError(f"need 0 < beta_min <= beta_0 <= beta_max, got {beta_min}, {beta_0}, {beta_max}")
        if depth < 1:
            raise ConfigError("encoder depth must be >= 1")
        params = ParamSet()
        enc_spec = MlpSpec(obs_dim, (encoding_size,) * (depth - 1), encoding_size, output_activation="tanh")
        enc = Mlp.create(enc_spec, params, rng, prefix="enc.")
        # zero output weights + bias log(beta_0): beta == beta_0 everywhere at start
        head = Mlp.create(MlpSpec(encoding_size, (head_hidden,), 1), params, rng, prefix="head.",
                          out_gain=0.0, out_bias=math.log(beta_0))
        return cls(enc, head, params, beta_min, beta_max, beta_0)

    @property
    def log_bounds(self):
        return math.log(self.beta_min), math.log(self.beta_max)

    @property
    def out_bias(self):
        """Name of the head's final bias (shifts every log-factor uniformly)."""
        return f"head.b{len(self.head.spec.layer_dims) - 1}"

    def raw_log_factor(self, obs):
        return self.head.forward(self.encoder.forward(obs))[:, 0]

    def log_beta(self, obs):
        """Taped, clamped log-factor for a batch of observations."""
        lo, hi = self.log_bounds
        raw = self.head(self.encoder(np.asarray(obs, dtype=np.float64)))
        return T.clamp(raw[:, 0], lo, hi)

    def embed(self, obs):
        return self.encoder.forward(obs)


def clamp_beta(net, raw_log_factor):
    lo, hi = net.log_bounds
    return np.exp(np.clip(raw_log_factor, lo, hi))


def beta_forward(net, obs):
    """beta(s) in [beta_min, beta_max] for each observation row."""
    return clamp_beta(net, net.raw_log_factor(obs))


def _corr_from_log_beta(log_beta, intrinsic, returns, eps):
    scaled = T.exp(log_beta) * np.asarray(intrinsic, dtype=np.float64)
    g_hat = zscore(returns, eps)
    return -T.mean(zscore_t(scaled, eps) * g_hat)


def _check(obs, intrinsic, returns):
    intrinsic = np.asarray(intrinsic, dtype=np.float64)
    returns = np.asarray(returns, dtype=np.float64)
    if len(obs) < 2 or intrinsic.shape != (len(obs),) or returns.shape != (len(obs),):
        raise ConfigError("corr_loss needs >= 2 aligned observations, intrinsic values and returns")
    return intrinsic, returns


def corr_loss(net, obs, intrinsic, returns, eps=1e-8):
    """Negative mean product of the standardized scaled-intrinsic and return vectors."""
    intrinsic, returns = _check(obs, intrinsic, returns)
    loss = _corr_from_log_beta(net.log_beta(obs), intrinsic, returns, eps)
    if not np.isfinite(loss.item()):
        raise NumericError(f"non-finite correlation loss: {loss.item()}", value=loss.item())
    return loss


def reg_loss(net, obs):
    """mean((log beta(s) - log beta_0)^2) on the clamped log-factor."""
    return T.mean(T.square(net.log_beta(obs) - math.log(net.beta_0)))


def beta_loss(net, obs, intrinsic, returns, lambda_reg, eps=1e-8):
    intrinsic, returns = _check(obs, intrinsic, returns)
    log_beta = net.log_beta(obs)
    l_corr = _corr_from_log_beta(log_beta, intrinsic, returns, eps)
    l_reg = T.mean(T.square(log_beta - math.log(net.beta_0)))
    total = l_corr + l_reg * lambda_reg
    if not np.isfinite(total.item()):
        raise NumericError(f"non-finite beta loss: {total.item()}", value=total.item())
    return total, l_corr, l_reg, log_beta


def beta_update(net, opt, obs, intrinsic, returns, lambda_reg, max_grad_norm=1.0, eps=1e-8):
    """A single clipped gradient step on L_corr + lambda_reg * L_reg over the whole batch."""
    total, l_corr, l_reg, log_beta = beta_loss(net, obs, intrinsic, returns, lambda_reg, eps)
    net.params.zero_grad()
    total.backward()
    optimizer_step(net.params, opt, max_grad_norm)
    betas = np.exp(log_beta.data)
    return {"l_corr": l_corr.item(), "l_reg": l_reg.item(), "beta_mean": float(betas.mean())}


def beta_stats(net, betas):
    betas = np.asarray(betas, dtype=np.float64)
    return {
        "beta_mean": float(betas.mean()),
        "beta_std": float(betas.std()),
        "beta_min": float(betas.min()),
        "beta_max": float(betas.max()),
        "beta_at_min": float(np.mean(betas <= net.beta_min * (1 + 1e-12))),
        "beta_at_max": float(np.mean(betas >= net.beta_max * (1 - 1e-12))),
    }


def make_beta_optimizer(net, lr, weight_decay=0.0):
    return OptimState.for_params(net.params, lr, weight_decay=weight_decay)
