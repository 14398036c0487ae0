"""Collect trainer outputs from run directories and run every analysis."""

from __future__ import annotations

import json
from collections import defaultdict
from pathlib import Path

import numpy as np

from acwi.analysis.curves import aggregate_curves
from acwi.analysis.histograms import beta_histograms
from acwi.analysis.pca import pca_project
from acwi.analysis.plots import render_plots
from acwi.analysis.visitation import visitation_heatmap
from acwi.config import from_flat
from acwi.envs import NUM_ACTIONS, OBS_DIM, obs_vector, parse_env_id
from acwi.envs.layouts import grid_shape
from acwi.errors import UsageError
from acwi.nn import load_arrays


def load_manifest(run_dir):
    path = Path(run_dir) / "manifest.json"
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e}") from None


def read_snapshot_obs(path):
    """``(obs vectors [n, 147], betas [n])`` decoded from a snapshot CSV."""
    import csv

    obs, betas = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            codes = np.frombuffer(bytes.fromhex(row["obs_hex"]), dtype=np.uint8)
            obs.append(obs_vector(codes))
            betas.append(float(row["beta"]))
    return np.array(obs).reshape(-1, OBS_DIM), np.array(betas)


def representation(cfg, checkpoint, obs, source="beta"):
    """Encoder embeddings of ``obs`` from a saved beta network or ICM."""
    rng = np.random.default_rng(0)
    if source == "beta":
        from acwi.beta_net import BetaNet

        net = BetaNet.create(OBS_DIM, rng, cfg.encoding_size, cfg.encoder_depth, cfg.beta_head_hidden,
                             cfg.beta_min, cfg.beta_max, cfg.beta_0)
        net.params.load_state_dict(load_arrays(Path(checkpoint) / "beta.params"))
        return net.embed(obs)
    from acwi.icm import IcmNets

    nets = IcmNets.create(OBS_DIM, NUM_ACTIONS, rng, cfg.feature_dim, (cfg.icm_hidden,), (cfg.icm_hidden,))
    nets.params.load_state_dict(load_arrays(Path(checkpoint) / "icm.params"))
    return nets.encoder.forward(obs)


def analyze_runs(run_dirs, out_dir, stages=4, window=1, pca_source=None, heatmap_steps=None, images=True):
    """Aggregate every run directory, grouped by environment; returns written paths."""
    if not run_dirs:
        raise UsageError("no run directories given")
    curves_in = defaultdict(lambda: defaultdict(list))
    snaps = defaultdict(list)
    traces = defaultdict(list)
    pca_inputs = {}
    runs = []
    for d in run_dirs:
        d = Path(d)
        man = load_manifest(d)
        cfg = from_flat(man["config"])
        runs.append((d, man, cfg))
    for d, man, cfg in runs:
        env, method = man["env"], man["method"]
        for seed in man["seeds"]:
            art = man["artifacts"][str(seed)]
            curves_in[env][method].append(d / art["metrics"])
            traces[(env, method)].append(d / art["trace"])
            if cfg.method == "acwi":
                snaps[env].extend(d / p for p in art["snapshots"])
                if env not in pca_inputs and art["snapshots"] and art["checkpoints"]:
                    pca_inputs[env] = (cfg, d / art["checkpoints"][-1], d / art["snapshots"][-1])

    outputs = {"curves": {}, "beta_hist": {}, "heatmaps": {}, "pca": {}}
    for env, files in curves_in.items():
        outputs["curves"][env] = aggregate_curves(dict(files), window)
    for env, paths in snaps.items():
        outputs["beta_hist"][env] = beta_histograms(paths, stages)
    for (env, method), paths in traces.items():
        shape = grid_shape(*parse_env_id(env))
        outputs["heatmaps"][(env, method)] = visitation_heatmap(paths, (0, heatmap_steps), shape)
    for env, (cfg, ckpt, snap) in pca_inputs.items():
        obs, betas = read_snapshot_obs(snap)
        reps = representation(cfg, ckpt, obs, pca_source or cfg.pca_source)
        outputs["pca"][env] = (pca_project(reps, betas), betas)
    return render_plots(outputs, out_dir, images=images), outputs
