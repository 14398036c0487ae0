"""MiniGrid-style gridworlds with egocentric partial observations."""

from __future__ import annotations

import re

from acwi.envs.grid import (
    OBS_DIM,
    VIEW_SIZE,
    GridState,
    StepResult,
    obs_vector,
    observe,
    render_ascii,
    reset,
    step,
)
from acwi.envs.layouts import ENV_NAMES, generate, grid_shape, max_steps_for
from acwi.envs.objects import NUM_ACTIONS, Action, Cell, Color, DoorState, Obj
from acwi.errors import ConfigError

# id -> (family, size, desk-scale?)
ENV_IDS = {
    "doorkey-8x8": ("doorkey", 8, False),
    "empty-16x16": ("empty", 16, False),
    "redbluedoors-8x8": ("redbluedoors", 8, False),
    "unlockpickup": ("unlockpickup", 6, False),
    "keycorridor-s3r3": ("keycorridor", 3, False),
    "empty-8x8": ("empty", 8, True),
    "doorkey-6x6": ("doorkey", 6, True),
    "redbluedoors-6x6": ("redbluedoors", 6, True),
    "keycorridor-s3r1": ("keycorridor", 1, True),
}


def parse_env_id(env_id):
    """Map ``doorkey-8x8`` / ``keycorridor-s3r1`` / ``empty-5x5`` style ids to (family, size)."""
    env_id = env_id.strip().lower()
    if env_id in ENV_IDS:
        name, size, _ = ENV_IDS[env_id]
        return name, size
    m = re.fullmatch(r"([a-z]+)-(\d+)x(\d+)", env_id)
    if m and m.group(1) in ENV_NAMES and m.group(2) == m.group(3):
        return m.group(1), int(m.group(2))
    m = re.fullmatch(r"keycorridor-s3r(\d+)", env_id)
    if m:
        return "keycorridor", int(m.group(1))
    m = re.fullmatch(r"unlockpickup(?:-(\d+))?", env_id)
    if m:
        return "unlockpickup", int(m.group(1) or 6)
    raise ConfigError(f"unknown environment id {env_id!r}")


def list_envs():
    return [(k, desk) for k, (_, _, desk) in ENV_IDS.items()]


def make_env(name, size=None, seed=0):
    """Build a fresh environment at episode 0.

    ``name`` is either a family (``doorkey``) with an explicit ``size`` or a
    full id such as ``doorkey-6x6``.
    """
    if size is None:
        name, size = parse_env_id(name)
    return generate(name, size, seed, 0)


__all__ = [
    "Action",
    "Cell",
    "Color",
    "DoorState",
    "ENV_IDS",
    "ENV_NAMES",
    "GridState",
    "NUM_ACTIONS",
    "OBS_DIM",
    "Obj",
    "StepResult",
    "VIEW_SIZE",
    "grid_shape",
    "list_envs",
    "make_env",
    "max_steps_for",
    "obs_vector",
    "observe",
    "parse_env_id",
    "render_ascii",
    "reset",
    "step",
]
