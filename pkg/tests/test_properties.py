"""Randomized invariants checked with hypothesis."""

import math

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from acwi import kernels
from acwi.analysis import histogram, pca_project
from acwi.beta_net import BetaNet, beta_forward, corr_loss
from acwi.config import RunConfig, from_flat
from acwi.envs import list_envs, make_env, obs_vector, observe, parse_env_id, step
from acwi.icm import rectify_normalize
from acwi.nn import zscore
from acwi.ppo import augment_rewards, normalize_advantages
from oracles import gae_double_sum, returns_double_sum

SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
finite = st.floats(-100, 100, allow_nan=False, allow_infinity=False)


def vectors(min_size=2, max_size=64, elements=finite):
    return st.integers(min_size, max_size).flatmap(lambda n: arrays(np.float64, n, elements=elements))


@SETTINGS
@given(vectors(elements=st.floats(-1e3, 1e3)))
def test_zscore_moments(x):
    z = zscore(x)
    assert abs(z.mean()) < 1e-6
    if x.std() > 1e-2:
        assert abs(z.std() - 1.0) < 1e-3


@SETTINGS
@given(vectors(elements=st.floats(0, 1e3)), st.floats(0.01, 100))
def test_rectified_intrinsic_nonnegative_and_scale_free(raw, c):
    out = rectify_normalize(raw).rectified
    assert np.all(out >= 0)
    if min(raw.std(), c * raw.std()) > 0.1:  # invariance holds up to eps / sigma
        np.testing.assert_allclose(rectify_normalize(c * raw).rectified, out, atol=1e-6)
    if np.all(raw == raw[0]):
        assert np.all(out == 0)


@SETTINGS
@given(st.integers(1, 40), st.floats(0, 0.999), st.floats(0, 1), st.integers(0, 2**31))
def test_gae_kernel_matches_oracle(n, gamma, lam, seed):
    rng = np.random.default_rng(seed)
    r, v, nv = rng.normal(size=n), rng.normal(size=n), rng.normal(size=n)
    ends = (rng.random(n) < 0.2).astype(float)
    want = gae_double_sum(list(r), list(v), list(nv), list(ends), gamma, lam)
    for impl in kernels.implementations().values():
        got = impl.gae(r[:, None].copy(), v[:, None].copy(), nv[:, None].copy(), ends[:, None].copy(), gamma, lam)
        np.testing.assert_allclose(got[:, 0], want, atol=1e-9, rtol=1e-9)


@SETTINGS
@given(st.integers(1, 40), st.floats(0, 0.999), st.integers(0, 2**31))
def test_returns_kernel_matches_oracle(n, gamma, seed):
    rng = np.random.default_rng(seed)
    r = rng.normal(size=n)
    ends = (rng.random(n) < 0.2).astype(float)
    np.testing.assert_allclose(kernels.discounted_returns(r, ends, gamma),
                               returns_double_sum(list(r), list(ends), gamma), atol=1e-9, rtol=1e-9)


@SETTINGS
@given(vectors(), st.floats(0, 1), st.floats(0.1, 2.0))
def test_augmentation_is_linear_in_intrinsic(ext, alpha, beta):
    intr = np.abs(ext[::-1])
    out = augment_rewards(ext, alpha, beta, intr)
    np.testing.assert_allclose(out - ext, alpha * beta * intr, atol=1e-9)


@SETTINGS
@given(vectors(min_size=3, elements=st.floats(-1e3, 1e3)))
def test_normalized_advantages(adv):
    out = normalize_advantages(adv)
    assert abs(out.mean()) < 1e-6
    if adv.std() > 1e-2:
        assert abs(out.std() - 1.0) < 1e-3


_NET = BetaNet.create(8, np.random.default_rng(0), encoding_size=8, head_hidden=8)


@SETTINGS
@given(st.integers(0, 2**31), st.floats(0.01, 10))
def test_beta_range_and_correlation_bound(seed, scale):
    rng = np.random.default_rng(seed)
    w, b = _NET.head.layers()[-1]
    w.data[...] = rng.normal(scale=scale, size=w.data.shape)
    b.data[...] = rng.normal(scale=scale)
    obs = rng.normal(scale=scale, size=(32, 8))
    betas = beta_forward(_NET, obs)
    assert betas.min() >= 0.1 * (1 - 1e-12) and betas.max() <= 2.0 * (1 + 1e-12)
    loss = corr_loss(_NET, obs, rng.exponential(size=32) * (rng.random(32) < 0.7), rng.normal(size=32))
    assert abs(loss.item()) <= 1 + 1e-6


@SETTINGS
@given(arrays(np.float64, st.integers(0, 300), elements=st.floats(-5, 5)))
def test_histogram_mass(betas):
    edges, counts = histogram(betas)
    assert counts.sum() == len(betas) and np.all(counts >= 0)
    assert edges[0] == 0.1 and edges[-1] == 2.0


@SETTINGS
@given(st.integers(3, 40), st.integers(2, 6), st.integers(0, 2**31))
def test_pca_ratios(n, d, seed):
    x = np.random.default_rng(seed).normal(size=(n, d))
    res = pca_project(x)
    r = res.explained_variance_ratio
    assert -1e-12 <= r[1] <= r[0] + 1e-12 and r.sum() <= 1 + 1e-8
    np.testing.assert_allclose(res.components @ res.components.T, np.eye(2), atol=1e-8)


ENV_IDS = [env_id for env_id, _ in list_envs()]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(ENV_IDS), st.integers(0, 10_000), st.lists(st.integers(0, 6), min_size=1, max_size=60))
def test_env_step_invariants(env_id, seed, actions):
    name, size = parse_env_id(env_id)
    state = make_env(name, size, seed=seed)
    obs = obs_vector(observe(state))
    assert obs.shape == (147,) and obs.min() >= 0 and obs.max() <= 1
    for t, a in enumerate(actions):
        res = step(state, a)
        assert 0.0 <= res.reward <= 1.0
        assert res.reward == 0.0 or res.terminated
        assert state.step_count == t + 1
        o = obs_vector(res.obs)
        assert o.min() >= 0 and o.max() <= 1
        if res.terminated or res.truncated:
            break


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 0.999), st.floats(0, 1), st.integers(1, 8), st.sampled_from(["ppo", "icm_fixed", "acwi"]),
       st.floats(0.01, 5), st.booleans())
def test_config_round_trip(gamma, lam, k, method, fixed_beta, wallclock):
    cfg = RunConfig(gamma=gamma, gae_lambda=lam, ppo_epochs=k, method=method, fixed_beta=fixed_beta,
                    log_wallclock=wallclock)
    back = from_flat(cfg.to_dict())
    assert back == cfg and back.hash() == cfg.hash()
    assert math.isfinite(back.gamma)
