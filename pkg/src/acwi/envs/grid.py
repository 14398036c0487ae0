"""Gridworld state, dynamics and egocentric observations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from acwi import kernels
from acwi.envs.objects import (
    CARRYABLE,
    CHANNEL_SIZES,
    DIR_VEC,
    Action,
    Cell,
    Color,
    DoorState,
    Obj,
    can_overlap,
)
from acwi.errors import UsageError

VIEW_SIZE = 7
OBS_DIM = VIEW_SIZE * VIEW_SIZE * 3
_OBS_SCALE = np.tile(1.0 / np.asarray(CHANNEL_SIZES, dtype=np.float64), VIEW_SIZE * VIEW_SIZE)


@dataclass
class GridState:
    name: str
    size: int
    seed: int
    grid: np.ndarray
    agent_pos: tuple
    agent_dir: int
    max_steps: int
    carrying: Optional[tuple] = None
    step_count: int = 0
    episode_index: int = 0
    done: bool = False
    info: dict = field(default_factory=dict)

    @property
    def width(self):
        return self.grid.shape[0]

    @property
    def height(self):
        return self.grid.shape[1]

    @property
    def front_pos(self):
        dx, dy = DIR_VEC[self.agent_dir]
        return self.agent_pos[0] + dx, self.agent_pos[1] + dy

    def cell(self, x, y):
        return Cell.decode(self.grid[x, y])

    def copy(self):
        return GridState(
            self.name, self.size, self.seed, self.grid.copy(), tuple(self.agent_pos), self.agent_dir,
            self.max_steps, self.carrying, self.step_count, self.episode_index, self.done,
            {k: (list(v) if isinstance(v, list) else v) for k, v in self.info.items()},
        )

    def to_dict(self):
        return {
            "name": self.name,
            "size": self.size,
            "seed": self.seed,
            "grid": self.grid.tolist(),
            "agent_pos": list(self.agent_pos),
            "agent_dir": self.agent_dir,
            "max_steps": self.max_steps,
            "carrying": None if self.carrying is None else list(self.carrying),
            "step_count": self.step_count,
            "episode_index": self.episode_index,
            "done": self.done,
            "info": {k: list(v) if isinstance(v, tuple) else v for k, v in self.info.items()},
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            name=d["name"], size=d["size"], seed=d["seed"],
            grid=np.asarray(d["grid"], dtype=np.uint8), agent_pos=tuple(d["agent_pos"]),
            agent_dir=d["agent_dir"], max_steps=d["max_steps"],
            carrying=None if d["carrying"] is None else tuple(d["carrying"]),
            step_count=d["step_count"], episode_index=d["episode_index"], done=d["done"],
            info={k: tuple(v) if isinstance(v, list) else v for k, v in d["info"].items()},
        )


class StepResult(NamedTuple):
    obs: np.ndarray
    reward: float
    terminated: bool
    truncated: bool


def observe(state):
    """7x7x3 egocentric view; the agent is at view cell (3, 6) facing row 0."""
    return kernels.gen_obs(state.grid, state.agent_pos[0], state.agent_pos[1], state.agent_dir, state.carrying)


def obs_vector(view):
    """Flatten a view to the 147-vector fed to networks, scaled into [0, 1]."""
    return view.reshape(-1) * _OBS_SCALE


def success_reward(state):
    return 1.0 - 0.9 * (state.step_count / state.max_steps)


def _set(state, pos, code):
    state.grid[pos[0], pos[1]] = code


def step(state, action):
    if state.done:
        raise UsageError("step() called on a finished episode; call reset() first")
    action = Action(int(action))
    state.step_count += 1
    reward = 0.0
    terminated = False

    fx, fy = state.front_pos
    in_bounds = 0 <= fx < state.width and 0 <= fy < state.height
    front = state.grid[fx, fy].copy() if in_bounds else np.array([Obj.WALL, Color.GREY, 0], dtype=np.uint8)

    if action == Action.LEFT:
        state.agent_dir = (state.agent_dir - 1) % 4
    elif action == Action.RIGHT:
        state.agent_dir = (state.agent_dir + 1) % 4
    elif action == Action.FORWARD:
        if in_bounds and can_overlap(front):
            state.agent_pos = (fx, fy)
            if front[0] == Obj.GOAL:
                terminated = True
                reward = success_reward(state)
    elif action == Action.PICKUP:
        if in_bounds and front[0] in CARRYABLE and state.carrying is None:
            state.carrying = tuple(int(v) for v in front)
            _set(state, (fx, fy), (Obj.EMPTY, 0, 0))
            target = state.info.get("target")
            if target is not None and tuple(state.carrying[:2]) == tuple(target):
                terminated = True
                reward = success_reward(state)
    elif action == Action.DROP:
        if in_bounds and front[0] == Obj.EMPTY and state.carrying is not None:
            _set(state, (fx, fy), state.carrying)
            state.carrying = None
    elif action == Action.TOGGLE:
        if in_bounds and front[0] == Obj.DOOR:
            terminated, reward = _toggle_door(state, (fx, fy), front)

    truncated = not terminated and state.step_count >= state.max_steps
    state.done = terminated or truncated
    return StepResult(observe(state), reward, terminated, truncated)


def _toggle_door(state, pos, code):
    door_state = code[2]
    if door_state == DoorState.LOCKED:
        c = state.carrying
        if c is not None and c[0] == Obj.KEY and c[1] == code[1]:
            _set(state, pos, (Obj.DOOR, code[1], DoorState.OPEN))
        return False, 0.0
    if door_state == DoorState.OPEN:
        _set(state, pos, (Obj.DOOR, code[1], DoorState.CLOSED))
        return False, 0.0

    red = state.info.get("red_door")
    blue = state.info.get("blue_door")
    if blue is not None and tuple(pos) == tuple(blue):
        if state.grid[red[0], red[1], 2] != DoorState.OPEN:
            return False, 0.0
        _set(state, pos, (Obj.DOOR, code[1], DoorState.OPEN))
        return True, success_reward(state)
    _set(state, pos, (Obj.DOOR, code[1], DoorState.OPEN))
    return False, 0.0


def reset(state, episode_index):
    """Regenerate the layout for ``episode_index``; returns the first view."""
    from acwi.envs.layouts import generate

    fresh = generate(state.name, state.size, state.seed, episode_index)
    state.grid = fresh.grid
    state.agent_pos = fresh.agent_pos
    state.agent_dir = fresh.agent_dir
    state.max_steps = fresh.max_steps
    state.info = fresh.info
    state.carrying = None
    state.step_count = 0
    state.episode_index = episode_index
    state.done = False
    return observe(state)


_GLYPHS = {Obj.EMPTY: ".", Obj.WALL: "#", Obj.FLOOR: ",", Obj.GOAL: "G", Obj.KEY: "k", Obj.BALL: "b", Obj.BOX: "x"}
_ARROWS = ">v<^"


def render_ascii(state):
    rows = []
    for y in range(state.height):
        row = []
        for x in range(state.width):
            if (x, y) == tuple(state.agent_pos):
                row.append(_ARROWS[state.agent_dir])
                continue
            o, _, s = state.grid[x, y]
            if o == Obj.DOOR:
                row.append("/" if s == DoorState.OPEN else ("L" if s == DoorState.LOCKED else "D"))
            else:
                row.append(_GLYPHS.get(Obj(o), "?"))
        rows.append("".join(row))
    return "\n".join(rows)
