"""CSV tables and matching PNG figures for each analysis."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from acwi.errors import AcwiError


def _fmt(x):
    return format(float(x), ".10g")


def _writer(path):
    fh = open(path, "w", newline="", encoding="utf-8")
    return fh, csv.writer(fh, lineterminator="\n")


def write_curves_csv(path, curves):
    fh, w = _writer(path)
    with fh:
        w.writerow(["method", "env_steps", "mean", "std", "seeds"])
        for method in sorted(curves):
            c = curves[method]
            for s, m, sd in zip(c["steps"], c["mean"], c["std"]):
                w.writerow([method, int(s), _fmt(m), _fmt(sd), c["seeds"]])


def write_hist_csv(path, hist):
    fh, w = _writer(path)
    with fh:
        w.writerow(["bin_lo", "bin_hi", "count", "iter_lo", "iter_hi"])
        for lo, hi, c in zip(hist.edges[:-1], hist.edges[1:], hist.counts):
            w.writerow([_fmt(lo), _fmt(hi), int(c), hist.iter_lo, hist.iter_hi])


def write_heatmap_csv(path, grid):
    """One row per grid row (y), one column per x."""
    counts = grid.counts
    fh, w = _writer(path)
    with fh:
        w.writerow([f"x{x}" for x in range(counts.shape[0])])
        for y in range(counts.shape[1]):
            w.writerow([int(c) for c in counts[:, y]])


def write_pca_csv(path, result, betas):
    fh, w = _writer(path)
    with fh:
        w.writerow(["pc1", "pc2", "beta"])
        for (a, b), beta in zip(result.projected, betas):
            w.writerow([_fmt(a), _fmt(b), _fmt(beta)])


def _figure():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_plots(outputs, out_dir, images=True):
    """Write every analysis in ``outputs`` as CSV (and PNG unless ``images=False``).

    ``outputs`` keys: ``curves`` ``{env: {method: series}}``, ``beta_hist``
    ``{env: [StageHistogram]}``, ``heatmaps`` ``{(env, method): VisitationGrid}``
    and ``pca`` ``{env: (PcaResult, betas)}``. Returns the written paths.
    """
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        return _render(outputs, out_dir, images)
    except OSError as e:
        raise AcwiError(f"cannot write analysis output under {out_dir}: {e}") from e


def _render(outputs, out_dir, images):
    written = []
    plt = _figure() if images else None

    for env, curves in sorted(outputs.get("curves", {}).items()):
        path = out_dir / f"curves_{env}.csv"
        write_curves_csv(path, curves)
        written.append(path)
        if plt:
            fig, ax = plt.subplots(figsize=(6, 4))
            for method in sorted(curves):
                c = curves[method]
                ax.plot(c["steps"], c["mean"], label=method)
                ax.fill_between(c["steps"], c["mean"] - c["std"], c["mean"] + c["std"], alpha=0.2)
            ax.set_xlabel("environment steps")
            ax.set_ylabel("episode return")
            ax.set_title(env)
            ax.legend(fontsize=7)
            written.append(_save(fig, path.with_suffix(".png"), plt))

    for env, hists in sorted(outputs.get("beta_hist", {}).items()):
        for h in hists:
            path = out_dir / f"beta_hist_{env}_{h.stage}.csv"
            write_hist_csv(path, h)
            written.append(path)
            if plt:
                fig, ax = plt.subplots(figsize=(5, 3))
                ax.bar(h.edges[:-1], h.counts, width=np.diff(h.edges), align="edge")
                ax.set_xlim(h.edges[0], h.edges[-1])
                ax.set_xlabel("beta")
                ax.set_title(f"{env} stage {h.stage} (iterations {h.iter_lo}-{h.iter_hi})")
                written.append(_save(fig, path.with_suffix(".png"), plt))

    for (env, method), grid in sorted(outputs.get("heatmaps", {}).items()):
        path = out_dir / f"heatmap_{env}_{method}.csv"
        write_heatmap_csv(path, grid)
        written.append(path)
        if plt:
            fig, ax = plt.subplots(figsize=(4, 4))
            im = ax.imshow(grid.log_counts.T, origin="upper", cmap="viridis")
            fig.colorbar(im, ax=ax, label="log(1 + visits)")
            ax.set_title(f"{env} {method}")
            written.append(_save(fig, path.with_suffix(".png"), plt))

    for env, (result, betas) in sorted(outputs.get("pca", {}).items()):
        path = out_dir / f"pca_{env}.csv"
        write_pca_csv(path, result, betas)
        written.append(path)
        if plt:
            fig, ax = plt.subplots(figsize=(5, 4))
            sc = ax.scatter(result.projected[:, 0], result.projected[:, 1], c=betas, s=4, cmap="coolwarm")
            fig.colorbar(sc, ax=ax, label="beta")
            r = result.explained_variance_ratio
            ax.set_xlabel(f"PC1 ({100 * r[0]:.1f}%)")
            ax.set_ylabel(f"PC2 ({100 * r[1]:.1f}%)")
            ax.set_title(env)
            written.append(_save(fig, path.with_suffix(".png"), plt))
    return written


def _save(fig, path, plt):
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)
    return path
