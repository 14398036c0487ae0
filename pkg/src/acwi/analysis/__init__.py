"""Learning curves, beta histograms, visitation heatmaps and PCA projections."""

from acwi.analysis.curves import aggregate_curves, aggregate_series, fill_gaps, read_series, smooth
from acwi.analysis.histograms import BINS, StageHistogram, beta_histograms, histogram
from acwi.analysis.pca import PcaResult, pca_project, power_iteration
from acwi.analysis.pipeline import analyze_runs
from acwi.analysis.plots import render_plots
from acwi.analysis.visitation import VisitationGrid, visitation_heatmap

__all__ = [
    "BINS",
    "PcaResult",
    "StageHistogram",
    "VisitationGrid",
    "aggregate_curves",
    "aggregate_series",
    "analyze_runs",
    "beta_histograms",
    "fill_gaps",
    "histogram",
    "pca_project",
    "power_iteration",
    "read_series",
    "render_plots",
    "smooth",
    "visitation_heatmap",
]
