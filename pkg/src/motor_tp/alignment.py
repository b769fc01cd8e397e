"""Temporal alignment of two sequences: DTW, ridge CCA and Canonical Time Warping.

Paths use the step set {(1,0), (0,1), (1,1)} with squared Euclidean frame
distance.  Ties in the dynamic program prefer the diagonal step, then an
advance of x alone, then an advance of y alone.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _kernels
from .decorrelate import DEFAULT_RETENTION, retained_count
from .errors import DegenerateError
from .mocap_io import MotionSequence

log = logging.getLogger(__name__)

DEFAULT_RIDGE = 1e-6
MAX_CCA_DIM = 10


@dataclass(frozen=True, eq=False)
class WarpPath:
    """Monotone alignment between two unaligned sequences.

    ``pairs`` is a ``(k, 2)`` int array of ``(t_x, t_y)`` indices.
    """

    pairs: np.ndarray
    x_len: int
    y_len: int

    def __post_init__(self):
        pairs = np.array(self.pairs, dtype=np.int64).reshape(-1, 2)
        if pairs.shape[0] == 0:
            raise ValueError("empty warp path")
        if tuple(pairs[0]) != (0, 0):
            raise ValueError(f"path must start at (0, 0), got {tuple(pairs[0])}")
        if tuple(pairs[-1]) != (self.x_len - 1, self.y_len - 1):
            raise ValueError("path must end at (x_len - 1, y_len - 1)")
        steps = np.diff(pairs, axis=0)
        if steps.size and (
            (steps < 0).any() or (steps > 1).any() or (steps.sum(axis=1) == 0).any()
        ):
            raise ValueError("path steps must be (1,0), (0,1) or (1,1)")
        pairs.setflags(write=False)
        object.__setattr__(self, "pairs", pairs)

    def __len__(self):
        return self.pairs.shape[0]

    def __eq__(self, other):
        if not isinstance(other, WarpPath):
            return NotImplemented
        return (
            self.x_len == other.x_len
            and self.y_len == other.y_len
            and np.array_equal(self.pairs, other.pairs)
        )

    __hash__ = None

    @property
    def x_duplicate_mask(self) -> np.ndarray:
        """True where ``t_x`` repeats the previous pair's ``t_x``."""
        mask = np.zeros(len(self), dtype=bool)
        mask[1:] = self.pairs[1:, 0] == self.pairs[:-1, 0]
        return mask

    @classmethod
    def diagonal(cls, length: int) -> WarpPath:
        idx = np.arange(length)
        return cls(np.column_stack([idx, idx]), length, length)

    def to_csv(self) -> str:
        lines = ["t_x,t_y,duplicate"]
        for (tx, ty), dup in zip(self.pairs.tolist(), self.x_duplicate_mask.tolist()):
            lines.append(f"{tx},{ty},{int(dup)}")
        return "\n".join(lines) + "\n"

    def dump(self, path) -> None:
        Path(path).write_text(self.to_csv())


def _frames(seq) -> np.ndarray:
    frames = seq.frames if isinstance(seq, MotionSequence) else np.asarray(seq, dtype=np.float64)
    if frames.ndim == 1:
        frames = frames[:, None]
    return np.ascontiguousarray(frames, dtype=np.float64)


def path_cost(x, y, pairs) -> float:
    """Total squared Euclidean distance accumulated along ``pairs``."""
    x, y = _frames(x), _frames(y)
    pairs = np.asarray(pairs)
    diff = x[pairs[:, 0]] - y[pairs[:, 1]]
    return float(np.sum(diff * diff))


def dtw_with_cost(x, y) -> tuple[WarpPath, float]:
    """Optimal warp path and its total cost."""
    fx, fy = _frames(x), _frames(y)
    if fx.shape[0] == 0 or fy.shape[0] == 0:
        raise ValueError("sequences must be nonempty")
    if fx.shape[1] != fy.shape[1]:
        raise ValueError(f"dimension mismatch: {fx.shape[1]} vs {fy.shape[1]} features")
    cost, pairs = _kernels.dtw_path(fx, fy)
    return WarpPath(pairs, fx.shape[0], fy.shape[0]), cost


def dtw_align(x, y) -> WarpPath:
    """Plain DTW over the raw features of ``x`` and ``y``."""
    return dtw_with_cost(x, y)[0]


@dataclass(frozen=True, eq=False)
class CcaProjection:
    """Canonical directions for two views.

    Project with ``(X - mean_x) @ proj_x`` and ``(Y - mean_y) @ proj_y``.
    ``rank`` is the feasible dimension; ``d`` may have been clamped to it.
    """

    proj_x: np.ndarray
    proj_y: np.ndarray
    correlations: np.ndarray
    mean_x: np.ndarray
    mean_y: np.ndarray
    rank: int

    @property
    def d(self) -> int:
        return self.proj_x.shape[1]

    def transform(self, X, Y) -> tuple[np.ndarray, np.ndarray]:
        return (_frames(X) - self.mean_x) @ self.proj_x, (_frames(Y) - self.mean_y) @ self.proj_y


def _inv_sqrt(cov: np.ndarray) -> np.ndarray:
    evals, evecs = np.linalg.eigh(cov)
    # guard exactly singular covariances when ridge is 0
    evals = np.maximum(evals, max(evals[-1], 1.0) * 1e-15)
    return (evecs / np.sqrt(evals)) @ evecs.T


def _numerical_rank(centered: np.ndarray) -> int:
    s = np.linalg.svd(centered, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > s[0] * 1e-10))


def cca(X, Y, d: int, ridge: float = DEFAULT_RIDGE) -> CcaProjection:
    """Ridge-regularized CCA via whitening and an SVD of the whitened cross-covariance.

    Each view's covariance gets ``ridge * I`` added before whitening, so
    rank-deficient inputs stay solvable.  Projected features have unit
    variance under that regularized covariance.
    """
    X, Y = _frames(X), _frames(Y)
    n = X.shape[0]
    if n < 2 or Y.shape[0] != n:
        raise ValueError("CCA needs two views with equal row counts >= 2")
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    if ridge < 0:
        raise ValueError("ridge must be non-negative")
    mean_x, mean_y = X.mean(axis=0), Y.mean(axis=0)
    Xc, Yc = X - mean_x, Y - mean_y

    rank = min(_numerical_rank(Xc), _numerical_rank(Yc))
    if rank == 0:
        raise DegenerateError("CCA input has no variance")
    if d > rank:
        warnings.warn(f"CCA dimension {d} clamped to feasible rank {rank}", RuntimeWarning, stacklevel=2)
        d = rank

    Cxx = Xc.T @ Xc / n + ridge * np.eye(X.shape[1])
    Cyy = Yc.T @ Yc / n + ridge * np.eye(Y.shape[1])
    Cxy = Xc.T @ Yc / n
    Wx, Wy = _inv_sqrt(Cxx), _inv_sqrt(Cyy)
    U, s, Vt = np.linalg.svd(Wx @ Cxy @ Wy)
    return CcaProjection(
        proj_x=Wx @ U[:, :d],
        proj_y=Wy @ Vt[:d].T,
        correlations=np.clip(s[:d], 0.0, 1.0),
        mean_x=mean_x,
        mean_y=mean_y,
        rank=rank,
    )


@dataclass(frozen=True)
class CtwConfig:
    """CTW settings; ``d=None`` picks the dimension from the data."""

    d: int | None = None
    ridge: float = DEFAULT_RIDGE
    max_iters: int = 20
    tol: float = 1e-4


@dataclass(frozen=True)
class CtwTrace:
    """Projected alignment cost of each accepted iteration and why CTW stopped."""

    costs: tuple[float, ...]
    stop_reason: str

    @property
    def iterations(self) -> int:
        return len(self.costs)


def default_cca_dim(x: np.ndarray, y: np.ndarray, retention: float = DEFAULT_RETENTION) -> int:
    """Components needed to cover ``retention`` of either side's variance, capped at 10."""
    counts = []
    for frames in (x, y):
        centered = frames - frames.mean(axis=0)
        s = np.linalg.svd(centered, compute_uv=False)
        power = s**2
        if power.sum() > 0:
            counts.append(retained_count(power / power.sum(), retention))
    return max(1, min(max(counts, default=1), MAX_CCA_DIM, x.shape[1]))


def ctw_align_traced(x, y, cfg: CtwConfig = CtwConfig()) -> tuple[WarpPath, CtwTrace]:
    """Canonical Time Warping, also returning the per-iteration cost trace.

    Starts from plain DTW, then alternates CCA on the currently paired frames
    (duplicates included) with DTW in the projected space.  An iteration whose
    projected cost exceeds the last accepted one is rejected and ends the loop.
    """
    fx, fy = _frames(x), _frames(y)
    path, _ = dtw_with_cost(fx, fy)
    d = cfg.d if cfg.d is not None else default_cca_dim(fx, fy)

    costs: list[float] = []
    reason = "max_iters"
    for it in range(cfg.max_iters):
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RuntimeWarning)
                proj = cca(fx[path.pairs[:, 0]], fy[path.pairs[:, 1]], d, cfg.ridge)
        except DegenerateError:
            reason = "degenerate"
            break
        px, py = proj.transform(fx, fy)
        new_path, cost = dtw_with_cost(px, py)
        if costs and cost > costs[-1]:
            reason = "cost_increase"
            break
        prev_cost = costs[-1] if costs else None
        unchanged = new_path == path
        path = new_path
        costs.append(cost)
        log.debug("ctw iteration %d: cost %.6g", it + 1, cost)
        if unchanged:
            reason = "converged"
            break
        if prev_cost is not None and prev_cost - cost < cfg.tol * prev_cost:
            reason = "tol"
            break
    return path, CtwTrace(tuple(costs), reason)


def ctw_align(x, y, cfg: CtwConfig = CtwConfig()) -> WarpPath:
    fx, fy = _frames(x), _frames(y)
    if fx.shape[1] != fy.shape[1]:
        raise ValueError(f"dimension mismatch: {fx.shape[1]} vs {fy.shape[1]} features")
    return ctw_align_traced(fx, fy, cfg)[0]


def pair_indices(path: WarpPath, burn_in: int = 2) -> np.ndarray:
    """Aligned ``(t_x, t_y)`` pairs that enter the information measure.

    Pairs that repeat an x frame are skipped, as are pairs touching the
    first ``burn_in`` frames of either sequence.
    """
    if burn_in < 0:
        raise ValueError("burn_in must be non-negative")
    pairs = path.pairs
    keep = ~path.x_duplicate_mask & (pairs[:, 0] >= burn_in) & (pairs[:, 1] >= burn_in)
    return pairs[keep]
