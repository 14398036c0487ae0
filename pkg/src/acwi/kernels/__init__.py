"""Hot inner loops: egocentric observation, GAE, discounted returns.

The compiled Cython module is used when it imports; otherwise the numpy
fallback is selected. Set ``ACWI_PURE_PYTHON=1`` to force the fallback.
"""

import os

import numpy as np

from acwi.kernels import _fallback

BACKEND = "python"
_impl = _fallback

if os.environ.get("ACWI_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from acwi.kernels import _ckernels as _impl  # noqa: F811

        BACKEND = "cython"
    except ImportError:
        _impl = _fallback


def gen_obs(grid, ax, ay, adir, carry=None):
    return _impl.gen_obs(grid, int(ax), int(ay), int(adir), carry)


def _as_2d(x):
    x = np.ascontiguousarray(x, dtype=np.float64)
    return x[:, None] if x.ndim == 1 else x


def gae(rewards, values, next_values, ends, gamma, lam):
    r = np.asarray(rewards)
    out = _impl.gae(_as_2d(r), _as_2d(values), _as_2d(next_values), _as_2d(ends), float(gamma), float(lam))
    return out.reshape(r.shape)


def discounted_returns(rewards, ends, gamma):
    r = np.asarray(rewards)
    out = _impl.discounted_returns(_as_2d(r), _as_2d(ends), float(gamma))
    return out.reshape(r.shape)


def implementations():
    """Available backends by name, for parity tests and benchmarks."""
    impls = {"python": _fallback}
    try:
        from acwi.kernels import _ckernels

        impls["cython"] = _ckernels
    except ImportError:
        pass
    return impls
