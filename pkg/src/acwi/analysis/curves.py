"""Learning-curve aggregation across seeds."""

from __future__ import annotations

import csv

import numpy as np

from acwi.errors import UsageError


def read_series(path, metric="ep_return_mean"):
    """``(env_steps, values)`` from one metrics CSV."""
    steps, values = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            steps.append(float(row["env_steps"]))
            values.append(float(row[metric]))
    return np.array(steps), np.array(values)


def fill_gaps(values):
    """Carry the last finite value forward; leading gaps become 0.

    Iterations in which no episode finished log NaN returns.
    """
    out = np.array(values, dtype=np.float64)
    last = 0.0
    for i, v in enumerate(out):
        if np.isfinite(v):
            last = v
        else:
            out[i] = last
    return out


def smooth(values, window):
    """Trailing moving average; the first ``window - 1`` points average what exists."""
    values = np.asarray(values, dtype=np.float64)
    if window <= 1 or len(values) == 0:
        return values.copy()
    c = np.concatenate([[0.0], np.cumsum(values)])
    idx = np.arange(1, len(values) + 1)
    lo = np.maximum(idx - window, 0)
    return (c[idx] - c[lo]) / (idx - lo)


def aggregate_series(series, window=1):
    """Mean and population std over aligned ``(steps, values)`` pairs.

    Series on different step grids are interpolated onto the first one,
    restricted to the range every series covers.
    """
    if not series:
        raise UsageError("no series to aggregate")
    grid = np.asarray(series[0][0], dtype=np.float64)
    hi = min(float(np.max(s)) for s, _ in series if len(s)) if all(len(s) for s, _ in series) else None
    if hi is None:
        raise UsageError("empty metrics series")
    grid = grid[grid <= hi]
    rows = []
    for steps, values in series:
        v = smooth(fill_gaps(values), window)
        steps = np.asarray(steps, dtype=np.float64)
        if len(steps) == len(grid) and np.array_equal(steps[:len(grid)], grid):
            rows.append(v[:len(grid)])
        else:
            rows.append(np.interp(grid, steps, v))
    stack = np.vstack(rows)
    return {"steps": grid, "mean": stack.mean(axis=0), "std": stack.std(axis=0), "seeds": len(rows)}


def aggregate_curves(files, window=1, metric="ep_return_mean"):
    """``{method: [csv paths]}`` -> ``{method: {steps, mean, std, seeds}}``."""
    if not files:
        raise UsageError("aggregate_curves needs at least one method")
    out = {}
    for method, paths in files.items():
        if not paths:
            raise UsageError(f"no metrics files for {method!r}")
        out[method] = aggregate_series([read_series(p, metric) for p in paths], window)
    return out
