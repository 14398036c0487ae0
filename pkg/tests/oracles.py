"""Independent reference implementations used only by the tests."""

from __future__ import annotations

import math

import numpy as np


def numeric_grad(f, x, idx, h=1e-5):
    """Central difference of scalar ``f()`` w.r.t. ``x.flat[idx]`` (mutates and restores x)."""
    old = x.flat[idx]
    x.flat[idx] = old + h
    fp = f()
    x.flat[idx] = old - h
    fm = f()
    x.flat[idx] = old
    return (fp - fm) / (2 * h)


def rel_err(a, n, floor=1e-6):
    return abs(a - n) / max(abs(a), abs(n), floor)


def check_param_grads(loss_fn, params, rng, coords=12, h=1e-5, skip=()):
    """Worst relative error between taped and finite-difference grads.

    ``loss_fn()`` returns a taped scalar. A random sample of ``coords``
    coordinates is checked in every parameter tensor whose name does not
    start with one of ``skip``.
    """
    params.zero_grad()
    loss_fn().backward()
    analytic = {k: t.grad.copy() for k, t in params.items()}
    params.zero_grad()
    worst = 0.0
    for name, t in params.items():
        if name.startswith(tuple(skip)):
            continue
        picks = rng.choice(t.data.size, size=min(coords, t.data.size), replace=False)
        for i in picks:
            num = numeric_grad(lambda: loss_fn().item(), t.data, int(i), h)
            worst = max(worst, rel_err(float(analytic[name].flat[i]), num))
    return worst


def pearson(x, y):
    """Textbook Pearson correlation, two passes, pure Python floats."""
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    return sxy / math.sqrt(sxx * syy)


def gae_double_sum(rewards, values, next_values, ends, gamma, lam):
    """A_t = sum_l (gamma*lam)^l delta_{t+l}, stopped after the first episode end."""
    T = len(rewards)
    delta = [rewards[t] + gamma * next_values[t] - values[t] for t in range(T)]
    out = []
    for t in range(T):
        acc = 0.0
        for l in range(T - t):
            acc += (gamma * lam) ** l * delta[t + l]
            if ends[t + l]:
                break
        out.append(acc)
    return np.array(out)


def returns_double_sum(rewards, ends, gamma):
    T = len(rewards)
    out = []
    for t in range(T):
        acc = 0.0
        for k in range(t, T):
            acc += gamma ** (k - t) * rewards[k]
            if ends[k]:
                break
        out.append(acc)
    return np.array(out)


def reachable(grid, start, passable):
    """4-neighbour flood fill over cells where ``passable(code)`` holds."""
    W, H = grid.shape[:2]
    seen = {tuple(start)}
    stack = [tuple(start)]
    while stack:
        x, y = stack.pop()
        for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            nx, ny = x + dx, y + dy
            if 0 <= nx < W and 0 <= ny < H and (nx, ny) not in seen and passable(grid[nx, ny]):
                seen.add((nx, ny))
                stack.append((nx, ny))
    return seen


def covariance_eig_ratios(X):
    """Explained-variance ratios from a dense symmetric eigendecomposition."""
    Xc = X - X.mean(axis=0)
    C = Xc.T @ Xc / len(X)
    w, V = np.linalg.eigh(C)
    order = np.argsort(w)[::-1]
    return w[order] / np.trace(C), V[:, order]
