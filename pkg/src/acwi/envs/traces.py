"""Newline-delimited JSON episode traces consumed by the heatmap analysis."""

from __future__ import annotations

import json


class TraceWriter:
    """Append-only writer; one record per environment step.

    Record keys: ``t`` (global env step), ``env``, ``episode``, ``step``,
    ``agent_pos``, ``action``, ``reward``, ``done``.
    """

    def __init__(self, path, limit=None):
        self.path = path
        self.limit = limit
        self.count = 0
        self._fh = open(path, "w", encoding="utf-8")

    @property
    def full(self):
        return self.limit is not None and self.count >= self.limit

    def write(self, t, env, episode, step, agent_pos, action, reward, done):
        if self.full:
            return
        rec = {
            "t": int(t), "env": int(env), "episode": int(episode), "step": int(step),
            "agent_pos": [int(agent_pos[0]), int(agent_pos[1])], "action": int(action),
            "reward": float(reward), "done": bool(done),
        }
        self._fh.write(json.dumps(rec, separators=(",", ":")) + "\n")
        self.count += 1

    def close(self):
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_traces(path):
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield json.loads(line)
