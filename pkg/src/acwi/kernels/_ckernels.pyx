# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels; see ``_fallback`` for semantics."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef enum:
    VIEW = 7
    WALL = 2
    DOOR = 4
    WALL_COLOR = 5

cdef int[4] FX = [1, 0, -1, 0]
cdef int[4] FY = [0, 1, 0, -1]
cdef int[4] RX = [0, -1, 0, 1]
cdef int[4] RY = [1, 0, -1, 0]


cdef inline bint _opaque(unsigned char[:, :, ::1] v, int i, int j) nogil:
    cdef unsigned char o = v[i, j, 0]
    return o == WALL or (o == DOOR and v[i, j, 2] != 0)


def gen_obs(const unsigned char[:, :, :] grid, int ax, int ay, int adir, carry):
    cdef int W = grid.shape[0]
    cdef int H = grid.shape[1]
    cdef int fx = FX[adir], fy = FY[adir], rx = RX[adir], ry = RY[adir]
    out = np.empty((VIEW, VIEW, 3), dtype=np.uint8)
    cdef unsigned char[:, :, ::1] view = out
    cdef unsigned char mask[VIEW][VIEW]
    cdef int vx, vy, d, s, wx, wy, i, j, c
    for vx in range(VIEW):
        for vy in range(VIEW):
            mask[vx][vy] = 0
            d = VIEW - 1 - vy
            s = vx - VIEW // 2
            wx = ax + fx * d + rx * s
            wy = ay + fy * d + ry * s
            if 0 <= wx < W and 0 <= wy < H:
                for c in range(3):
                    view[vx, vy, c] = grid[wx, wy, c]
            else:
                view[vx, vy, 0] = WALL
                view[vx, vy, 1] = WALL_COLOR
                view[vx, vy, 2] = 0

    mask[VIEW // 2][VIEW - 1] = 1
    for j in range(VIEW - 1, -1, -1):
        for i in range(0, VIEW - 1):
            if not mask[i][j] or _opaque(view, i, j):
                continue
            mask[i + 1][j] = 1
            if j > 0:
                mask[i + 1][j - 1] = 1
                mask[i][j - 1] = 1
        for i in range(VIEW - 1, 0, -1):
            if not mask[i][j] or _opaque(view, i, j):
                continue
            mask[i - 1][j] = 1
            if j > 0:
                mask[i - 1][j - 1] = 1
                mask[i][j - 1] = 1

    for vx in range(VIEW):
        for vy in range(VIEW):
            if not mask[vx][vy]:
                view[vx, vy, 0] = 0
                view[vx, vy, 1] = 0
                view[vx, vy, 2] = 0
    if carry is None:
        view[VIEW // 2, VIEW - 1, 0] = 1
        view[VIEW // 2, VIEW - 1, 1] = 0
        view[VIEW // 2, VIEW - 1, 2] = 0
    else:
        for c in range(3):
            view[VIEW // 2, VIEW - 1, c] = <unsigned char>carry[c]
    return out


def gae(const double[:, :] rewards, const double[:, :] values, const double[:, :] next_values,
        const double[:, :] ends, double gamma, double lam):
    cdef Py_ssize_t T = rewards.shape[0]
    cdef Py_ssize_t N = rewards.shape[1]
    adv_arr = np.zeros((T, N), dtype=np.float64)
    cdef double[:, ::1] adv = adv_arr
    cdef double last, delta
    cdef Py_ssize_t t, n
    for n in range(N):
        last = 0.0
        for t in range(T - 1, -1, -1):
            delta = rewards[t, n] + gamma * next_values[t, n] - values[t, n]
            last = delta + gamma * lam * (1.0 - ends[t, n]) * last
            adv[t, n] = last
    return adv_arr


def discounted_returns(const double[:, :] rewards, const double[:, :] ends, double gamma):
    cdef Py_ssize_t T = rewards.shape[0]
    cdef Py_ssize_t N = rewards.shape[1]
    out_arr = np.zeros((T, N), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double acc
    cdef Py_ssize_t t, n
    for n in range(N):
        acc = 0.0
        for t in range(T - 1, -1, -1):
            acc = rewards[t, n] + gamma * (1.0 - ends[t, n]) * acc
            out[t, n] = acc
    return out_arr
