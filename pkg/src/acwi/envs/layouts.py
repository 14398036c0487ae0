"""Procedural layouts for the five task families.

Every layout is a deterministic function of ``(seed, episode_index)``.
"""

from __future__ import annotations

import numpy as np

from acwi.envs.grid import GridState
from acwi.envs.objects import Color, DoorState, Obj
from acwi.errors import ConfigError

ENV_NAMES = ("doorkey", "empty", "redbluedoors", "unlockpickup", "keycorridor")
KEYCORRIDOR_ROOM = 3


def max_steps_for(name, size):
    if name == "empty":
        return 4 * size * size
    if name == "doorkey":
        return 10 * size * size
    if name == "redbluedoors":
        return 20 * size
    if name == "unlockpickup":
        return 8 * size * size
    if name == "keycorridor":
        return 30 * KEYCORRIDOR_ROOM * KEYCORRIDOR_ROOM
    raise ConfigError(f"unknown environment {name!r}")


def validate(name, size):
    if name not in ENV_NAMES:
        raise ConfigError(f"unknown environment {name!r}; expected one of {ENV_NAMES}")
    lo = {"empty": 4, "doorkey": 5, "redbluedoors": 4, "unlockpickup": 4, "keycorridor": 1}[name]
    if not isinstance(size, (int, np.integer)) or size < lo or size > 64:
        raise ConfigError(f"invalid size {size!r} for {name}: need {lo} <= size <= 64")


class _Builder:
    def __init__(self, width, height, rng):
        self.grid = np.zeros((width, height, 3), dtype=np.uint8)
        self.grid[:, :, 0] = Obj.EMPTY
        self.rng = rng
        self.agent_pos = None
        self.agent_dir = 0

    def wall(self, x, y):
        self.grid[x, y] = (Obj.WALL, Color.GREY, 0)

    def wall_rect(self, x0, y0, w, h):
        for x in range(x0, x0 + w):
            self.wall(x, y0)
            self.wall(x, y0 + h - 1)
        for y in range(y0, y0 + h):
            self.wall(x0, y)
            self.wall(x0 + w - 1, y)

    def put(self, x, y, obj, color=0, state=0):
        self.grid[x, y] = (obj, color, state)

    def randint(self, lo, hi):
        """Uniform integer in [lo, hi)."""
        return int(self.rng.integers(lo, hi))

    def free_cell(self, top, size):
        x0, y0 = top
        w, h = size
        for _ in range(10_000):
            x = self.randint(x0, x0 + w)
            y = self.randint(y0, y0 + h)
            if self.grid[x, y, 0] != Obj.EMPTY or (x, y) == self.agent_pos:
                continue
            return x, y
        raise ConfigError("could not find a free cell")

    def place(self, obj, color, top, size):
        x, y = self.free_cell(top, size)
        self.put(x, y, obj, color)
        return x, y

    def place_agent(self, top, size):
        self.agent_pos = self.free_cell(top, size)
        self.agent_dir = self.randint(0, 4)


def _empty(b, size):
    b.wall_rect(0, 0, size, size)
    b.put(size - 2, size - 2, Obj.GOAL, Color.GREEN)
    b.place_agent((1, 1), (size - 2, size - 2))
    return {}


def _doorkey(b, size):
    b.wall_rect(0, 0, size, size)
    b.put(size - 2, size - 2, Obj.GOAL, Color.GREEN)
    split = b.randint(2, size - 2)
    for y in range(size):
        b.wall(split, y)
    b.place_agent((1, 1), (split - 1, size - 2))
    door_y = b.randint(1, size - 1)
    b.put(split, door_y, Obj.DOOR, Color.YELLOW, DoorState.LOCKED)
    key = b.place(Obj.KEY, Color.YELLOW, (1, 1), (split - 1, size - 2))
    return {"door": (split, door_y), "key": key}


def _redbluedoors(b, size):
    b.wall_rect(0, 0, 2 * size, size)
    left = size // 2
    b.wall_rect(left, 0, size, size)
    b.place_agent((left + 1, 1), (size - 2, size - 2))
    red = (left, b.randint(1, size - 1))
    blue = (left + size - 1, b.randint(1, size - 1))
    b.put(*red, Obj.DOOR, Color.RED, DoorState.CLOSED)
    b.put(*blue, Obj.DOOR, Color.BLUE, DoorState.CLOSED)
    return {"red_door": red, "blue_door": blue}


def _room_walls(b, cols, rows, room):
    step = room - 1
    for i in range(cols):
        for j in range(rows):
            b.wall_rect(i * step, j * step, room, room)


def _room_interior(i, j, room):
    step = room - 1
    return (i * step + 1, j * step + 1), (room - 2, room - 2)


def _unlockpickup(b, room):
    _room_walls(b, 2, 1, room)
    door = (room - 1, b.randint(1, room - 1))
    color = Color(b.randint(0, len(Color)))
    b.put(*door, Obj.DOOR, color, DoorState.LOCKED)
    box_color = Color(b.randint(0, len(Color)))
    box = b.place(Obj.BOX, box_color, *_room_interior(1, 0, room))
    key = b.place(Obj.KEY, color, *_room_interior(0, 0, room))
    b.place_agent(*_room_interior(0, 0, room))
    return {"door": door, "key": key, "box": box, "target": (int(Obj.BOX), int(box_color))}


def _keycorridor(b, rows):
    room = KEYCORRIDOR_ROOM
    step = room - 1
    _room_walls(b, 3, rows, room)
    # middle column becomes one corridor
    for j in range(1, rows):
        for x in range(step + 1, 2 * step):
            b.put(x, j * step, Obj.EMPTY)
    locked_row = b.randint(0, rows)
    color = Color(b.randint(0, len(Color)))
    others = [c for c in Color if c != color]

    def side_door(col, row, state, c):
        x = step if col == 0 else 2 * step
        y = row * step + b.randint(1, room - 1)
        b.put(x, y, Obj.DOOR, c, state)
        return x, y

    locked = side_door(2, locked_row, DoorState.LOCKED, color)
    ball_color = Color(b.randint(0, len(Color)))
    ball = b.place(Obj.BALL, ball_color, *_room_interior(2, locked_row, room))
    key_row = b.randint(0, rows)
    key = b.place(Obj.KEY, color, *_room_interior(0, key_row, room))
    for row in range(rows):
        side_door(0, row, DoorState.CLOSED, others[b.randint(0, len(others))])
        if row != locked_row:
            side_door(2, row, DoorState.CLOSED, others[b.randint(0, len(others))])
    b.place_agent(*_room_interior(1, rows // 2, room))
    return {"door": locked, "key": key, "ball": ball, "target": (int(Obj.BALL), int(ball_color))}


def grid_shape(name, size):
    if name == "redbluedoors":
        return 2 * size, size
    if name == "unlockpickup":
        return 2 * (size - 1) + 1, size
    if name == "keycorridor":
        return 3 * (KEYCORRIDOR_ROOM - 1) + 1, size * (KEYCORRIDOR_ROOM - 1) + 1
    return size, size


_GENERATORS = {
    "empty": _empty,
    "doorkey": _doorkey,
    "redbluedoors": _redbluedoors,
    "unlockpickup": _unlockpickup,
    "keycorridor": _keycorridor,
}


def generate(name, size, seed, episode_index):
    validate(name, size)
    if seed < 0 or episode_index < 0:
        raise ConfigError("seed and episode_index must be non-negative")
    rng = np.random.default_rng([int(seed), int(episode_index)])
    w, h = grid_shape(name, size)
    b = _Builder(w, h, rng)
    info = _GENERATORS[name](b, size)
    return GridState(
        name=name, size=int(size), seed=int(seed), grid=b.grid, agent_pos=b.agent_pos,
        agent_dir=b.agent_dir, max_steps=max_steps_for(name, size), episode_index=int(episode_index),
        info=info,
    )
