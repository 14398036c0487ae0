"""Pure numpy/Python versions of the hot kernels.

Semantics are identical to the compiled module ``_ckernels``; the test-suite
checks the two against each other.
"""

import numpy as np

VIEW = 7
WALL = 2
DOOR = 4
UNSEEN = 0
EMPTY = 1
WALL_COLOR = 5

# (forward, right) unit vectors per direction: E, S, W, N
_FWD = ((1, 0), (0, 1), (-1, 0), (0, -1))
_RIGHT = ((0, 1), (-1, 0), (0, -1), (1, 0))


def gen_obs(grid, ax, ay, adir, carry):
    """Egocentric 7x7x3 view with wall/door occlusion.

    ``grid`` is uint8 [W, H, 3]; ``carry`` is a length-3 encoding or None.
    The agent sits at view cell (3, 6) looking toward row 0.
    """
    W, H = grid.shape[0], grid.shape[1]
    fx, fy = _FWD[adir]
    rx, ry = _RIGHT[adir]
    view = np.empty((VIEW, VIEW, 3), dtype=np.uint8)
    for vx in range(VIEW):
        for vy in range(VIEW):
            d = VIEW - 1 - vy
            s = vx - VIEW // 2
            wx = ax + fx * d + rx * s
            wy = ay + fy * d + ry * s
            if 0 <= wx < W and 0 <= wy < H:
                view[vx, vy] = grid[wx, wy]
            else:
                view[vx, vy] = (WALL, WALL_COLOR, 0)

    mask = np.zeros((VIEW, VIEW), dtype=bool)
    mask[VIEW // 2, VIEW - 1] = True

    def opaque(i, j):
        o = view[i, j, 0]
        return o == WALL or (o == DOOR and view[i, j, 2] != 0)

    for j in range(VIEW - 1, -1, -1):
        for i in range(0, VIEW - 1):
            if not mask[i, j] or opaque(i, j):
                continue
            mask[i + 1, j] = True
            if j > 0:
                mask[i + 1, j - 1] = True
                mask[i, j - 1] = True
        for i in range(VIEW - 1, 0, -1):
            if not mask[i, j] or opaque(i, j):
                continue
            mask[i - 1, j] = True
            if j > 0:
                mask[i - 1, j - 1] = True
                mask[i, j - 1] = True

    view[~mask] = UNSEEN
    if carry is None:
        view[VIEW // 2, VIEW - 1] = (EMPTY, 0, 0)
    else:
        view[VIEW // 2, VIEW - 1] = carry
    return view


def gae(rewards, values, next_values, ends, gamma, lam):
    """Time-major [T, N] generalized advantage estimation.

    ``next_values[t]`` is the value of the successor state (already zero for
    terminal steps); ``ends[t]`` cuts the lambda-chain after step ``t``.
    """
    T = rewards.shape[0]
    adv = np.zeros_like(rewards)
    last = np.zeros(rewards.shape[1:], dtype=np.float64)
    for t in range(T - 1, -1, -1):
        delta = rewards[t] + gamma * next_values[t] - values[t]
        last = delta + gamma * lam * (1.0 - ends[t]) * last
        adv[t] = last
    return adv


def discounted_returns(rewards, ends, gamma):
    """Time-major [T, N] discounted sums that stop at episode ends."""
    T = rewards.shape[0]
    out = np.zeros_like(rewards)
    acc = np.zeros(rewards.shape[1:], dtype=np.float64)
    for t in range(T - 1, -1, -1):
        acc = rewards[t] + gamma * (1.0 - ends[t]) * acc
        out[t] = acc
    return out
