"""Integer codes for grid contents (MiniGrid-compatible numbering)."""

from dataclasses import dataclass
from enum import IntEnum
from typing import Optional


class Obj(IntEnum):
    UNSEEN = 0
    EMPTY = 1
    WALL = 2
    FLOOR = 3
    DOOR = 4
    KEY = 5
    BALL = 6
    BOX = 7
    GOAL = 8
    LAVA = 9
    AGENT = 10


class Color(IntEnum):
    RED = 0
    GREEN = 1
    BLUE = 2
    PURPLE = 3
    YELLOW = 4
    GREY = 5


class DoorState(IntEnum):
    OPEN = 0
    CLOSED = 1
    LOCKED = 2


class Action(IntEnum):
    LEFT = 0
    RIGHT = 1
    FORWARD = 2
    PICKUP = 3
    DROP = 4
    TOGGLE = 5
    DONE = 6


NUM_ACTIONS = len(Action)
# per-channel cardinalities used to scale observations into [0, 1]
CHANNEL_SIZES = (len(Obj), len(Color), len(DoorState))
CARRYABLE = (Obj.KEY, Obj.BALL, Obj.BOX)
# direction index -> (dx, dy): east, south, west, north
DIR_VEC = ((1, 0), (0, 1), (-1, 0), (0, -1))


@dataclass(frozen=True)
class Cell:
    object: Obj
    color: Optional[Color] = None
    door_state: Optional[DoorState] = None

    def __post_init__(self):
        if (self.object == Obj.DOOR) != (self.door_state is not None):
            raise ValueError("door_state is set exactly for doors")

    @classmethod
    def decode(cls, code):
        obj = Obj(int(code[0]))
        if obj in (Obj.EMPTY, Obj.UNSEEN):
            return cls(obj)
        state = DoorState(int(code[2])) if obj == Obj.DOOR else None
        return cls(obj, Color(int(code[1])), state)

    def encode(self):
        color = 0 if self.color is None else int(self.color)
        state = 0 if self.door_state is None else int(self.door_state)
        return (int(self.object), color, state)


def can_overlap(code):
    o = code[0]
    return o in (Obj.EMPTY, Obj.GOAL, Obj.FLOOR) or (o == Obj.DOOR and code[2] == DoorState.OPEN)
