import os
import subprocess
import sys

import numpy as np
import pytest

from acwi import kernels
from acwi.envs import Action, make_env, step
from oracles import gae_double_sum, returns_double_sum

IMPLS = kernels.implementations()


def test_compiled_backend_is_selected_when_built():
    if "cython" not in IMPLS:
        pytest.skip("compiled extension not built")
    assert kernels.BACKEND == "cython"


def test_pure_python_switch():
    code = "from acwi import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, ACWI_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@pytest.mark.skipif("cython" not in IMPLS, reason="compiled extension not built")
def test_gen_obs_backends_agree_on_random_walks():
    py, cy = IMPLS["python"], IMPLS["cython"]
    rng = np.random.default_rng(0)
    for env_id in ("doorkey-8x8", "keycorridor-s3r3", "redbluedoors-8x8", "unlockpickup", "empty-16x16"):
        st = make_env(env_id, seed=int(rng.integers(1000)))
        for _ in range(400):
            if st.done:
                break
            args = (st.grid, st.agent_pos[0], st.agent_pos[1], st.agent_dir, st.carrying)
            np.testing.assert_array_equal(py.gen_obs(*args), cy.gen_obs(*args))
            step(st, int(rng.integers(7)))


def _random_segment(rng, T, N):
    r = rng.normal(size=(T, N))
    v = rng.normal(size=(T, N))
    nv = rng.normal(size=(T, N))
    ends = (rng.random((T, N)) < 0.15).astype(np.float64)
    return r, v, nv, ends


@pytest.mark.parametrize("name", sorted(IMPLS))
def test_gae_matches_double_sum(name):
    impl = IMPLS[name]
    rng = np.random.default_rng(1)
    for _ in range(30):
        T = int(rng.integers(1, 40))
        r, v, nv, ends = _random_segment(rng, T, 1)
        got = impl.gae(r, v, nv, ends, 0.99, 0.95)[:, 0]
        want = gae_double_sum(r[:, 0], v[:, 0], nv[:, 0], ends[:, 0], 0.99, 0.95)
        np.testing.assert_allclose(got, want, rtol=0, atol=1e-10)


@pytest.mark.parametrize("name", sorted(IMPLS))
def test_discounted_returns_match_double_sum(name):
    impl = IMPLS[name]
    rng = np.random.default_rng(2)
    for _ in range(30):
        T = int(rng.integers(1, 40))
        r, _, _, ends = _random_segment(rng, T, 3)
        got = impl.discounted_returns(r, ends, 0.99)
        for j in range(3):
            np.testing.assert_allclose(got[:, j], returns_double_sum(r[:, j], ends[:, j], 0.99), atol=1e-10)


def test_wrappers_accept_vectors():
    r = np.array([0.0, 0.0, 1.0])
    out = kernels.discounted_returns(r, np.array([0.0, 0.0, 1.0]), 0.5)
    np.testing.assert_allclose(out, [0.25, 0.5, 1.0])
    assert out.shape == (3,)


def test_gen_obs_carry_shows_in_agent_cell():
    st = make_env("doorkey-8x8", seed=3)
    view = kernels.gen_obs(st.grid, *st.agent_pos, st.agent_dir, (5, 4, 0))
    assert tuple(view[3, 6]) == (5, 4, 0)
    view = kernels.gen_obs(st.grid, *st.agent_pos, st.agent_dir, None)
    assert tuple(view[3, 6]) == (1, 0, 0)
    assert int(Action.TOGGLE) == 5
