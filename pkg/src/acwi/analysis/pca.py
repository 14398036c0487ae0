"""Two-component PCA by power iteration with deflation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from acwi.errors import DegenerateInputError

TOL = 1e-10
MAX_ITER = 10_000


@dataclass
class PcaResult:
    components: np.ndarray  # [2, d], orthonormal rows
    projected: np.ndarray   # [n, 2]
    explained_variance_ratio: np.ndarray
    eigenvalues: np.ndarray
    mean: np.ndarray


def _orient(v):
    """Flip so the largest-magnitude entry is positive."""
    return v if v[np.argmax(np.abs(v))] >= 0 else -v


def power_iteration(C, orth=(), tol=TOL, max_iter=MAX_ITER):
    """Dominant unit eigenvector of symmetric PSD ``C`` restricted to the complement of ``orth``.

    Returns ``(eigenvalue, vector)``; the eigenvalue is the Rayleigh quotient.
    """
    d = C.shape[0]
    v = np.ones(d) / np.sqrt(d) + np.linspace(0.0, 1e-3, d)

    def project(x):
        for u in orth:
            x = x - (u @ x) * u
        return x

    v = project(v)
    nv = np.linalg.norm(v)
    if nv < 1e-12:
        v, nv = _complement_vector(orth[0], d), 1.0
    v /= nv
    for _ in range(max_iter):
        w = project(C @ v)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0, v
        w /= nw
        if w @ v < 0:
            w = -w
        if np.linalg.norm(w - v) < tol:
            v = w
            break
        v = w
    return float(v @ C @ v), v


def _complement_vector(u, d):
    """A unit vector orthogonal to ``u`` (deterministic)."""
    for e in np.eye(d)[np.argsort(np.abs(u))]:
        w = e - (u @ e) * u
        n = np.linalg.norm(w)
        if n > 1e-6:
            return w / n
    raise DegenerateInputError("cannot build an orthogonal direction")


def pca_project(representations, betas=None, tol=TOL, max_iter=MAX_ITER):
    """Top-2 principal directions of the rows of ``representations``.

    ``betas`` is accepted for symmetry with plotting callers and is unused
    here.
    """
    X = np.asarray(representations, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 3 or X.shape[1] < 2:
        raise DegenerateInputError(f"need an [n >= 3, d >= 2] matrix, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise DegenerateInputError("representations contain non-finite values")
    mean = X.mean(axis=0)
    Xc = X - mean
    C = Xc.T @ Xc / X.shape[0]
    total = float(np.trace(C))
    if total <= 1e-12 * max(1.0, float(np.abs(X).max()) ** 2):
        raise DegenerateInputError("all representations are identical")

    lam1, v1 = power_iteration(C, tol=tol, max_iter=max_iter)
    v1 = _orient(v1)
    C2 = C - lam1 * np.outer(v1, v1)
    lam2, v2 = power_iteration(C2, orth=(v1,), tol=tol, max_iter=max_iter)
    if lam2 <= 1e-12 * total:
        # nothing left after deflation: any orthogonal direction will do
        v2 = _complement_vector(v1, len(v1))
        lam2 = float(max(v2 @ C @ v2, 0.0))
    v2 = v2 - (v1 @ v2) * v1
    v2 = _orient(v2 / np.linalg.norm(v2))
    comps = np.vstack([v1, v2])
    lams = np.array([lam1, lam2])
    proj = Xc @ comps.T
    proj -= proj.mean(axis=0)
    return PcaResult(comps, proj, np.clip(lams / total, 0.0, 1.0), lams, mean)
