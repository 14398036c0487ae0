"""Loss primitives and batch standardization."""

from __future__ import annotations

import numpy as np

from acwi.errors import ConfigError
from acwi.nn import tensor as T


def zscore(batch, eps=1e-8):
    """(x - mean) / sqrt(var + eps) with the population variance."""
    x = np.asarray(batch, dtype=np.float64)
    if x.size == 0:
        raise ConfigError("zscore needs at least one element")
    mu = x.mean()
    var = np.mean((x - mu) ** 2)
    return (x - mu) / np.sqrt(var + eps)


def zscore_t(x, eps=1e-8):
    """Taped zscore; gradients flow through the batch mean and variance."""
    mu = T.mean(x)
    centered = x - mu
    var = T.mean(T.square(centered))
    return centered / T.sqrt(var + eps)


def cross_entropy(logits, labels):
    """Mean negative log-likelihood of ``labels`` under softmax(logits)."""
    logits = T.as_tensor(logits)
    labels = np.asarray(labels, dtype=np.int64)
    n, k = logits.shape
    if labels.shape != (n,):
        raise ConfigError(f"labels shape {labels.shape} does not match batch {n}")
    if labels.size and (labels.min() < 0 or labels.max() >= k):
        raise ConfigError(f"labels must lie in [0, {k})")
    return -T.mean(T.pick(T.log_softmax(logits), labels))


def one_hot(labels, n):
    labels = np.asarray(labels, dtype=np.int64)
    out = np.zeros((labels.size, n))
    out[np.arange(labels.size), labels] = 1.0
    return out


def categorical_entropy(log_probs):
    """Per-row entropy from taped log-probabilities."""
    return -T.sum_(T.exp(log_probs) * log_probs, axis=1)
