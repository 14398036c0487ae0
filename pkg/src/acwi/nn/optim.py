"""Adam with global-norm gradient clipping and coupled L2 weight decay."""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass, field

import numpy as np

from acwi.errors import NumericError


@dataclass
class OptimState:
    learning_rate: float
    betas: tuple = (0.9, 0.999)
    eps: float = 1e-8
    weight_decay: float = 0.0
    step_count: int = 0
    first_moment: OrderedDict = field(default_factory=OrderedDict)
    second_moment: OrderedDict = field(default_factory=OrderedDict)

    @classmethod
    def for_params(cls, params, learning_rate, **kw):
        st = cls(learning_rate=learning_rate, **kw)
        for name, t in params.items():
            st.first_moment[name] = np.zeros_like(t.data)
            st.second_moment[name] = np.zeros_like(t.data)
        return st

    def to_arrays(self):
        out = OrderedDict()
        out["step_count"] = np.array([self.step_count], dtype=np.float64)
        out["hyper"] = np.array([self.learning_rate, *self.betas, self.eps, self.weight_decay])
        for k, v in self.first_moment.items():
            out[f"m/{k}"] = v
        for k, v in self.second_moment.items():
            out[f"v/{k}"] = v
        return out

    @classmethod
    def from_arrays(cls, arrays):
        lr, b1, b2, eps, wd = (float(x) for x in arrays["hyper"])
        st = cls(learning_rate=lr, betas=(b1, b2), eps=eps, weight_decay=wd,
                 step_count=int(arrays["step_count"][0]))
        for k, v in arrays.items():
            if k.startswith("m/"):
                st.first_moment[k[2:]] = np.array(v)
            elif k.startswith("v/"):
                st.second_moment[k[2:]] = np.array(v)
        return st


def global_grad_norm(params):
    return float(np.sqrt(sum(float(np.sum(t.grad * t.grad)) for t in params.values())))


def clip_grad_norm(params, max_norm):
    """Rescale all grads in place so their joint L2 norm is at most ``max_norm``."""
    norm = global_grad_norm(params)
    if max_norm is not None and np.isfinite(max_norm) and norm > max_norm:
        scale = max_norm / norm
        for t in params.values():
            t.grad *= scale
    return norm


def optimizer_step(params, opt, max_grad_norm=None):
    """One Adam update. Grads are clipped first and cleared afterwards."""
    norm = global_grad_norm(params)
    if not np.isfinite(norm):
        bad = next(n for n, t in params.items() if not np.all(np.isfinite(t.grad)))
        raise NumericError(f"non-finite gradient in {bad!r}")
    if max_grad_norm is not None and np.isfinite(max_grad_norm) and norm > max_grad_norm:
        scale = max_grad_norm / norm
        for t in params.values():
            t.grad *= scale
    opt.step_count += 1
    b1, b2 = opt.betas
    step_size = opt.learning_rate / (1.0 - b1 ** opt.step_count)
    inv_bc2 = 1.0 / np.sqrt(1.0 - b2 ** opt.step_count)
    for name, t in params.items():
        g = t.grad
        if opt.weight_decay:
            g += opt.weight_decay * t.data
        m = opt.first_moment[name]
        v = opt.second_moment[name]
        tmp = np.multiply(g, 1.0 - b1)
        m *= b1
        m += tmp
        np.multiply(g, g, out=tmp)
        tmp *= 1.0 - b2
        v *= b2
        v += tmp
        # m_hat / (sqrt(v_hat) + eps), computed in the scratch buffer
        np.sqrt(v, out=tmp)
        tmp *= inv_bc2
        tmp += opt.eps
        np.divide(m, tmp, out=tmp)
        tmp *= step_size
        t.data -= tmp
    params.zero_grad()
    return norm
