"""PCA decorrelation shared by both sequences of a pair."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateError
from .mocap_io import MotionSequence

DEFAULT_RETENTION = 0.90


@dataclass(frozen=True, eq=False)
class PcaBasis:
    """Principal directions fitted on one sequence.

    Attributes
    ----------
    mean : (p,) array
    components : (p, m) array
        Orthonormal columns, strongest direction first.
    explained : (m,) array
        Share of total variance carried by each retained direction.
    total_variance : float
        Sum of the per-feature population variances of the fitted data.
    """

    mean: np.ndarray
    components: np.ndarray
    explained: np.ndarray
    total_variance: float

    @property
    def m(self) -> int:
        return self.components.shape[1]

    @property
    def p(self) -> int:
        return self.components.shape[0]

    @property
    def variance_covered(self) -> float:
        return float(self.explained.sum())


def retained_count(explained_all: np.ndarray, retention: float) -> int:
    """Smallest count whose cumulative share reaches ``retention``."""
    cumulative = np.cumsum(explained_all)
    # absorb rounding so retention=1.0 keeps every nonzero direction
    m = int(np.searchsorted(cumulative, retention - 1e-12, side="left")) + 1
    return min(m, len(explained_all))


def fit_pca(x: MotionSequence | np.ndarray, retention: float = DEFAULT_RETENTION) -> PcaBasis:
    if not 0.0 < retention <= 1.0:
        raise ValueError(f"retention must be in (0, 1], got {retention}")
    frames = x.frames if isinstance(x, MotionSequence) else np.asarray(x, dtype=np.float64)
    T, p = frames.shape
    if T <= p:
        warnings.warn(
            f"PCA on {T} frames with {p} features; the covariance is rank deficient",
            RuntimeWarning,
            stacklevel=2,
        )
    mean = frames.mean(axis=0)
    centered = frames - mean
    _, s, vt = np.linalg.svd(centered, full_matrices=False)
    eigvals = s**2 / T
    total = float(eigvals.sum())
    if not total > 0.0:
        raise DegenerateError("zero total variance")
    explained_all = eigvals / total
    m = retained_count(explained_all, retention)
    # drop trailing directions that carry no variance at all
    m = min(m, int(np.count_nonzero(explained_all > 0)))

    components = vt[:m].T.copy()
    pivot = np.argmax(np.abs(components), axis=0)
    signs = np.sign(components[pivot, np.arange(m)])
    components *= signs
    for arr in (mean, components):
        arr.setflags(write=False)
    explained = explained_all[:m].copy()
    explained.setflags(write=False)
    return PcaBasis(mean=mean, components=components, explained=explained, total_variance=total)


def project(seq: MotionSequence, basis: PcaBasis) -> MotionSequence:
    """Map every frame to ``(frame - basis.mean) @ basis.components``."""
    if seq.n_features != basis.p:
        raise ValueError(f"sequence has {seq.n_features} features, basis expects {basis.p}")
    scores = (seq.frames - basis.mean) @ basis.components
    labels = [f"pc{j}" for j in range(basis.m)]
    return MotionSequence(seq.frame_rate, labels, scores, normalized=seq.normalized)


def reconstruct(projected: MotionSequence, basis: PcaBasis, labels=None) -> MotionSequence:
    """Map projected scores back to feature space (exact when nothing was discarded)."""
    frames = projected.frames @ basis.components.T + basis.mean
    if labels is None:
        labels = [f"f{k}" for k in range(basis.p)]
    return MotionSequence(projected.frame_rate, labels, frames, normalized=projected.normalized)
