"""Fully-connected networks with Tanh hidden layers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from acwi.errors import ConfigError
from acwi.nn import tensor as T

HIDDEN_ACTIVATIONS = ("tanh",)
OUTPUT_ACTIVATIONS = ("identity", "softmax", "tanh")


@dataclass(frozen=True)
class MlpSpec:
    input_dim: int
    hidden_dims: tuple = ()
    output_dim: int = 1
    hidden_activation: str = "tanh"
    output_activation: str = "identity"

    def __post_init__(self):
        object.__setattr__(self, "hidden_dims", tuple(int(h) for h in self.hidden_dims))
        dims = (self.input_dim, *self.hidden_dims, self.output_dim)
        if any(int(d) < 1 for d in dims):
            raise ConfigError(f"all layer sizes must be >= 1, got {dims}")
        if self.hidden_activation not in HIDDEN_ACTIVATIONS:
            raise ConfigError(f"unknown hidden activation {self.hidden_activation!r}")
        if self.output_activation not in OUTPUT_ACTIVATIONS:
            raise ConfigError(f"unknown output activation {self.output_activation!r}")

    @property
    def layer_dims(self):
        dims = (self.input_dim, *self.hidden_dims, self.output_dim)
        return list(zip(dims[:-1], dims[1:]))


def orthogonal(rng, n_in, n_out, gain):
    """Orthogonal matrix of shape (n_in, n_out) scaled by ``gain``."""
    a = rng.standard_normal((max(n_in, n_out), min(n_in, n_out)))
    q, r = np.linalg.qr(a)
    q = q * np.sign(np.diag(r))
    if n_in < n_out:
        q = q.T
    return gain * q[:n_in, :n_out]


@dataclass
class Mlp:
    """An MLP whose weights live in a (possibly shared) ParamSet under ``prefix``."""

    spec: MlpSpec
    params: object
    prefix: str = ""
    _names: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        self._names = [(f"{self.prefix}W{i}", f"{self.prefix}b{i}") for i in range(len(self.spec.layer_dims))]
        for (wn, bn), (n_in, n_out) in zip(self._names, self.spec.layer_dims):
            if wn not in self.params or bn not in self.params:
                raise ConfigError(f"missing parameters {wn}/{bn}")
            if self.params[wn].shape != (n_in, n_out) or self.params[bn].shape != (n_out,):
                raise ConfigError(
                    f"parameter shapes for layer {wn} do not match spec: "
                    f"{self.params[wn].shape}, {self.params[bn].shape} vs ({n_in}, {n_out})"
                )

    @classmethod
    def create(cls, spec, params, rng, prefix="", hidden_gain=np.sqrt(2.0), out_gain=1.0, out_bias=0.0):
        dims = spec.layer_dims
        for i, (n_in, n_out) in enumerate(dims):
            gain = out_gain if i == len(dims) - 1 else hidden_gain
            w = orthogonal(rng, n_in, n_out, gain) if gain != 0.0 else np.zeros((n_in, n_out))
            b = np.full(n_out, out_bias if i == len(dims) - 1 else 0.0)
            params.add(f"{prefix}W{i}", w)
            params.add(f"{prefix}b{i}", b)
        return cls(spec, params, prefix)

    def layers(self):
        return [(self.params[wn], self.params[bn]) for wn, bn in self._names]

    def _check_input(self, x):
        if x.ndim != 2 or x.shape[1] != self.spec.input_dim:
            raise ConfigError(f"expected input [batch x {self.spec.input_dim}], got {x.shape}")

    def forward(self, x):
        """Untracked numpy forward pass."""
        x = np.asarray(x, dtype=np.float64)
        self._check_input(x)
        layers = self.layers()
        h = x
        for i, (w, b) in enumerate(layers):
            h = h @ w.data + b.data
            if i < len(layers) - 1:
                h = np.tanh(h)
        return _activate_np(h, self.spec.output_activation)

    def __call__(self, x):
        """Taped forward pass returning a Tensor."""
        x = T.as_tensor(x)
        self._check_input(x.data)
        layers = self.layers()
        h = x
        for i, (w, b) in enumerate(layers):
            h = T.matmul(h, w) + b
            if i < len(layers) - 1:
                h = T.tanh(h)
        act = self.spec.output_activation
        if act == "softmax":
            return T.softmax(h)
        if act == "tanh":
            return T.tanh(h)
        return h


def _activate_np(h, act):
    if act == "softmax":
        z = h - h.max(axis=1, keepdims=True)
        e = np.exp(z)
        return e / e.sum(axis=1, keepdims=True)
    if act == "tanh":
        return np.tanh(h)
    return h


def mlp_forward(spec, params, x, prefix=""):
    return Mlp(spec, params, prefix).forward(x)
