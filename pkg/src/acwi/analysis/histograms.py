"""Per-stage histograms of logged beta samples."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

BINS = 40
LOW, HIGH = 0.1, 2.0


@dataclass
class StageHistogram:
    stage: int
    iter_lo: int
    iter_hi: int
    edges: np.ndarray
    counts: np.ndarray

    @property
    def total(self):
        return int(self.counts.sum())


def read_snapshot(path):
    """``(iterations, betas)`` from one snapshot CSV."""
    its, betas = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            its.append(int(row["iteration"]))
            betas.append(float(row["beta"]))
    return np.array(its, dtype=np.int64), np.array(betas)


def histogram(betas, bins=BINS, low=LOW, high=HIGH):
    """Fixed-edge counts; values outside the range land in the end bins."""
    edges = np.linspace(low, high, bins + 1)
    counts, _ = np.histogram(np.clip(betas, low, high), bins=edges)
    return edges, counts


def stage_of(iterations, lo, hi, stages):
    span = hi - lo + 1
    return np.minimum((np.asarray(iterations) - lo) * stages // span, stages - 1)


def beta_histograms(paths, stages=4, bins=BINS, low=LOW, high=HIGH):
    """Split training into ``stages`` equal iteration windows and histogram each."""
    its, betas = [], []
    for p in paths:
        i, b = read_snapshot(p)
        its.append(i)
        betas.append(b)
    its = np.concatenate(its) if its else np.zeros(0, dtype=np.int64)
    betas = np.concatenate(betas) if betas else np.zeros(0)
    if len(its) == 0:
        edges = np.linspace(low, high, bins + 1)
        return [StageHistogram(s, 0, 0, edges, np.zeros(bins, dtype=np.int64)) for s in range(stages)]
    lo, hi = int(its.min()), int(its.max())
    st = stage_of(its, lo, hi, stages)
    span = hi - lo + 1
    out = []
    for s in range(stages):
        mask = st == s
        edges, counts = histogram(betas[mask], bins, low, high)
        out.append(StageHistogram(s, lo + -(-s * span // stages), lo + -(-(s + 1) * span // stages) - 1,
                                  edges, counts))
    return out
