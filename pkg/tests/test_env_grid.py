import numpy as np
import pytest

from acwi.envs import (
    ENV_IDS,
    OBS_DIM,
    Action,
    Cell,
    Color,
    DoorState,
    GridState,
    Obj,
    list_envs,
    make_env,
    obs_vector,
    observe,
    parse_env_id,
    render_ascii,
    reset,
    step,
)
from acwi.envs.grid import success_reward
from acwi.envs.objects import CHANNEL_SIZES, can_overlap
from acwi.envs.solver import ScriptedPolicy, solve
from acwi.envs.traces import TraceWriter, read_traces
from acwi.errors import ConfigError, UsageError
from oracles import reachable


def _count(grid, obj, color=None, state=None):
    m = grid[:, :, 0] == obj
    if color is not None:
        m &= grid[:, :, 1] == color
    if state is not None:
        m &= grid[:, :, 2] == state
    return int(m.sum())


def test_make_env_is_deterministic():
    a, b = make_env("empty", 8, seed=0), make_env("empty", 8, seed=0)
    np.testing.assert_array_equal(a.grid, b.grid)
    assert (a.agent_pos, a.agent_dir) == (b.agent_pos, b.agent_dir)


@pytest.mark.parametrize("seed", range(25))
def test_doorkey_layout(seed):
    st = make_env("doorkey", 8, seed=seed)
    g = st.grid
    assert _count(g, Obj.KEY) == 1
    assert _count(g, Obj.DOOR, state=DoorState.LOCKED) == 1
    assert _count(g, Obj.GOAL) == 1
    dx, dy = st.info["door"]
    # the door sits in a full-height wall column that splits the room
    assert all(g[dx, y, 0] in (Obj.WALL, Obj.DOOR) for y in range(st.height))
    free = lambda c: c[0] != Obj.WALL and c[0] != Obj.DOOR  # noqa: E731
    left = reachable(g, st.agent_pos, free)
    key = tuple(st.info["key"])
    goal = tuple(np.argwhere(g[:, :, 0] == Obj.GOAL)[0])
    assert key in left and goal not in left
    assert (dx - 1, dy) in left
    both = reachable(g, st.agent_pos, lambda c: c[0] != Obj.WALL)
    assert goal in both


@pytest.mark.parametrize("seed", range(25))
def test_redbluedoors_layout(seed):
    st = make_env("redbluedoors", 8, seed=seed)
    g = st.grid
    assert _count(g, Obj.DOOR, Color.RED) == 1 and _count(g, Obj.DOOR, Color.BLUE) == 1
    red, blue = st.info["red_door"], st.info["blue_door"]
    assert g[red][0] == Obj.DOOR and g[blue][0] == Obj.DOOR
    # opposite (west / east) walls of the inner room
    assert blue[0] - red[0] == 8 - 1


def test_forward_into_wall():
    st = make_env("empty", 8, seed=0)
    st.agent_pos, st.agent_dir = (1, 1), 3
    res = step(st, Action.FORWARD)
    assert st.agent_pos == (1, 1) and res.reward == 0.0 and not res.terminated


def test_goal_reward_formula():
    st = make_env("empty", 8, seed=0)
    st.agent_pos, st.agent_dir = (6, 5), 1  # goal at (6, 6), facing south
    st.step_count = 9
    res = step(st, Action.FORWARD)
    assert res.terminated and not res.truncated
    assert res.reward == pytest.approx(1 - 0.9 * 10 / 256)


def test_truncation_at_max_steps():
    st = make_env("empty", 8, seed=0)
    st.max_steps = 3
    out = [step(st, Action.LEFT) for _ in range(3)]
    assert [r.truncated for r in out] == [False, False, True]
    assert all(r.reward == 0 for r in out)
    with pytest.raises(UsageError):
        step(st, Action.LEFT)


def _face(st, pos):
    """Put the agent on the cell west of ``pos`` looking east."""
    st.agent_pos, st.agent_dir = (pos[0] - 1, pos[1]), 0


def test_blue_before_red_stays_closed_then_sequence_succeeds():
    st = make_env("redbluedoors", 8, seed=4)
    blue, red = st.info["blue_door"], st.info["red_door"]
    _face(st, blue)
    res = step(st, Action.TOGGLE)
    assert st.grid[blue][2] == DoorState.CLOSED and not res.terminated and res.reward == 0
    st.agent_pos, st.agent_dir = (red[0] + 1, red[1]), 2
    step(st, Action.TOGGLE)
    assert st.grid[red][2] == DoorState.OPEN
    _face(st, blue)
    res = step(st, Action.TOGGLE)
    assert res.terminated and res.reward > 0


def test_locked_door_needs_matching_key():
    st = make_env("doorkey", 6, seed=1)
    door = st.info["door"]
    _face(st, door)
    step(st, Action.TOGGLE)
    assert st.grid[door][2] == DoorState.LOCKED
    st.carrying = (int(Obj.KEY), int(Color.RED), 0)
    step(st, Action.TOGGLE)
    assert st.grid[door][2] == DoorState.LOCKED
    st.carrying = (int(Obj.KEY), int(Color.YELLOW), 0)
    step(st, Action.TOGGLE)
    assert st.grid[door][2] == DoorState.OPEN


def test_pickup_and_drop():
    st = make_env("doorkey", 6, seed=2)
    key = st.info["key"]
    plan = solve(st)
    sim = st.copy()
    for a in plan:
        step(sim, a)
        if sim.carrying is not None:
            break
    assert sim.carrying[0] == Obj.KEY and sim.grid[key][0] == Obj.EMPTY
    sim.agent_dir = (sim.agent_dir + 2) % 4  # turn around; the cell behind was walkable
    fx, fy = sim.front_pos
    if sim.grid[fx, fy, 0] == Obj.EMPTY:
        step(sim, Action.DROP)
        assert sim.carrying is None and sim.grid[fx, fy, 0] == Obj.KEY


def test_occlusion_facing_wall():
    st = make_env("empty", 8, seed=0)
    st.agent_pos, st.agent_dir = (3, 1), 3
    view = observe(st)
    assert np.all(view[:, 5, 0] == Obj.WALL)
    assert np.all(view[:, :5, 0] == Obj.UNSEEN)


def test_rotation_restores_view_and_repeat_is_identical():
    st = make_env("doorkey", 8, seed=3)
    v0 = observe(st)
    np.testing.assert_array_equal(v0, observe(st))
    for _ in range(4):
        step(st, Action.LEFT)
    np.testing.assert_array_equal(observe(st), v0)


def test_reset_contracts():
    st = make_env("empty", 16, seed=5)
    step(st, Action.FORWARD)
    st.carrying = (5, 0, 0)
    v1 = reset(st, 3)
    assert st.step_count == 0 and st.carrying is None and not st.done
    g1, p1 = st.grid.copy(), st.agent_pos
    v2 = reset(st, 3)
    np.testing.assert_array_equal(g1, st.grid)
    np.testing.assert_array_equal(v1, v2)
    assert p1 == st.agent_pos
    starts = set()
    for i in range(10):
        reset(st, i)
        starts.add((st.agent_pos, st.agent_dir))
    assert len(starts) > 1


def test_obs_vector_range_and_length():
    st = make_env("keycorridor-s3r3", seed=0)
    v = obs_vector(observe(st))
    assert v.shape == (OBS_DIM,) == (147,)
    assert v.min() >= 0 and v.max() < 1
    view = observe(st)
    for c, n in enumerate(CHANNEL_SIZES):
        assert view[:, :, c].max() < n


def test_replay_is_bitwise_reproducible():
    rng = np.random.default_rng(0)
    actions = rng.integers(0, 7, size=300)

    def play():
        st = make_env("unlockpickup", seed=11)
        out = []
        for a in actions:
            if st.done:
                reset(st, st.episode_index + 1)
            r = step(st, a)
            out.append((r.obs.tobytes(), r.reward, r.terminated, r.truncated))
        return out

    assert play() == play()


@pytest.mark.parametrize("env_id", list(ENV_IDS))
def test_fuzz_invariants(env_id):
    rng = np.random.default_rng(hash(env_id) % 2**32)
    st = make_env(env_id, seed=1)
    for _ in range(3000):
        r = step(st, int(rng.integers(7)))
        x, y = st.agent_pos
        assert 0 <= x < st.width and 0 <= y < st.height
        assert st.grid[x, y, 0] != Obj.WALL
        assert st.step_count <= st.max_steps
        assert r.reward == 0 or (r.terminated and 0 < r.reward <= 1)
        assert r.truncated == (st.step_count >= st.max_steps and not r.terminated)
        if r.terminated or r.truncated:
            reset(st, st.episode_index + 1)


@pytest.mark.parametrize("env_id", list(ENV_IDS))
def test_solver_succeeds(env_id):
    for seed in range(10):
        st = make_env(env_id, seed=seed)
        pol = ScriptedPolicy()
        while True:
            r = step(st, pol(st))
            if r.terminated or r.truncated:
                break
        assert r.terminated and r.reward > 0


def test_env_ids_and_errors():
    assert parse_env_id("doorkey-8x8") == ("doorkey", 8)
    assert parse_env_id("keycorridor-s3r3") == ("keycorridor", 3)
    assert parse_env_id("empty-5x5") == ("empty", 5)
    full = [e for e, desk in list_envs() if not desk]
    assert full == ["doorkey-8x8", "empty-16x16", "redbluedoors-8x8", "unlockpickup", "keycorridor-s3r3"]
    for bad in ("maze-8x8", "doorkey-2x2", "empty-8x9"):
        with pytest.raises(ConfigError):
            make_env(bad)


def test_cell_model():
    assert Cell.decode((4, 2, 2)) == Cell(Obj.DOOR, Color.BLUE, DoorState.LOCKED)
    assert Cell(Obj.KEY, Color.RED).encode() == (5, 0, 0)
    with pytest.raises(ValueError):
        Cell(Obj.KEY, Color.RED, DoorState.OPEN)
    with pytest.raises(ValueError):
        Cell(Obj.DOOR, Color.RED)
    assert can_overlap((4, 0, 0)) and not can_overlap((4, 0, 1))


def test_state_serialization_round_trip():
    st = make_env("keycorridor-s3r1", seed=2)
    step(st, Action.FORWARD)
    back = GridState.from_dict(st.to_dict())
    np.testing.assert_array_equal(back.grid, st.grid)
    assert back.to_dict() == st.to_dict()
    text = render_ascii(st)
    assert len(text.splitlines()) == st.height
    assert sum(text.count(c) for c in ">v<^") == 1


def test_success_reward_bounds():
    st = make_env("empty", 8, seed=0)
    st.step_count = st.max_steps
    assert success_reward(st) == pytest.approx(0.1)


def test_trace_round_trip(tmp_path):
    p = tmp_path / "t.jsonl"
    with TraceWriter(p, limit=2) as w:
        for t in range(5):
            w.write(t, 0, 0, t, (1, 2), 3, 0.0, False)
    recs = list(read_traces(p))
    assert len(recs) == 2 and recs[1]["agent_pos"] == [1, 2]
