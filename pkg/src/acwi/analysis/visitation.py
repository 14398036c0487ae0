"""State-visitation counts from step traces."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from acwi.envs.traces import read_traces


@dataclass
class VisitationGrid:
    counts: np.ndarray  # [width, height]

    @property
    def log_counts(self):
        return np.log1p(self.counts)

    @property
    def total(self):
        return int(self.counts.sum())


def visitation_heatmap(paths, phase=(0, None), shape=None):
    """Count agent positions for trace records with ``phase[0] <= t < phase[1]``.

    ``shape`` is ``(width, height)``; when omitted it is the bounding box of
    the recorded positions.
    """
    if isinstance(paths, (str, bytes)) or hasattr(paths, "__fspath__"):
        paths = [paths]
    start, stop = phase
    xs, ys = [], []
    for p in paths:
        for rec in read_traces(p):
            t = rec["t"]
            if t < start or (stop is not None and t >= stop):
                continue
            xs.append(rec["agent_pos"][0])
            ys.append(rec["agent_pos"][1])
    xs = np.array(xs, dtype=np.int64)
    ys = np.array(ys, dtype=np.int64)
    if shape is None:
        shape = (int(xs.max()) + 1 if len(xs) else 1, int(ys.max()) + 1 if len(ys) else 1)
    counts = np.zeros(shape, dtype=np.int64)
    np.add.at(counts, (xs, ys), 1)
    return VisitationGrid(counts)
