"""Residual-correlation mutual information and throughput of a sequence pair.

For one decorrelated component the estimate is::

    I = -(n/2) log2(1 - rho^2) - (1/2) log2(n)          [bits]
    TP = R * I / n                                       [bits per second]

where ``rho`` is the correlation of the two AR(2) residual series over the
aligned frame pairs, ``n`` the number of such pairs and ``R`` the frame
rate.  The second term is a one-parameter description-length penalty, so
estimates for unrelated sequences come out slightly negative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .alignment import CtwConfig, WarpPath, ctw_align, dtw_align, pair_indices
from .armodel import VARIANCE_FLOOR, fit_ar2
from .decorrelate import DEFAULT_RETENTION, fit_pca, project
from .errors import AnalysisError, DegenerateError
from .mocap_io import ALIGNMENT_METHODS, MotionSequence, ThroughputReport, normalize

DEFAULT_CLAMP = 1e-6
AR_BURN_IN = 2


@dataclass(frozen=True)
class ChannelEstimate:
    """Information estimate for one decorrelated component."""

    component_index: int
    rho_hat: float
    n_eff: int
    mi_bits: float
    tp_bps: float

    def __post_init__(self):
        if not abs(self.rho_hat) < 1.0:
            raise ValueError(f"rho_hat must be clamped inside (-1, 1), got {self.rho_hat}")
        if self.n_eff < 1:
            raise ValueError("n_eff must be positive")
        expected = mutual_information(self.rho_hat, self.n_eff)
        if not math.isclose(self.mi_bits, expected, rel_tol=1e-9, abs_tol=1e-9):
            raise ValueError(f"mi_bits {self.mi_bits} inconsistent with rho_hat and n_eff")


def residual_correlation(rx, ry, pairs, clamp: float = DEFAULT_CLAMP) -> float:
    """Pearson correlation of residuals gathered through aligned frame pairs.

    ``pairs`` holds source frame indices; residual ``k`` belongs to frame
    ``k + 2``.  The result is clamped to ``[-(1 - clamp), 1 - clamp]``.
    """
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    if pairs.shape[0] < 3:
        raise DegenerateError(f"need at least 3 pairs, got {pairs.shape[0]}")
    rx = np.asarray(rx, dtype=np.float64)[pairs[:, 0] - AR_BURN_IN]
    ry = np.asarray(ry, dtype=np.float64)[pairs[:, 1] - AR_BURN_IN]
    rx = rx - rx.mean()
    ry = ry - ry.mean()
    sxx = float(rx @ rx)
    syy = float(ry @ ry)
    if sxx <= 0.0 or syy <= 0.0:
        raise DegenerateError("degenerate channel")
    rho = float(rx @ ry) / math.sqrt(sxx * syy)
    limit = 1.0 - clamp
    return min(max(rho, -limit), limit)


def mutual_information(rho_hat: float, n_eff: int) -> float:
    """Penalized mutual information in bits; may be negative."""
    if not abs(rho_hat) < 1.0:
        raise ValueError(f"|rho_hat| must be < 1, got {rho_hat}")
    if n_eff < 1:
        raise ValueError(f"n_eff must be >= 1, got {n_eff}")
    return -(n_eff / 2) * math.log2(1.0 - rho_hat**2) - 0.5 * math.log2(n_eff)


def throughput(rho_hat: float, n_eff: int, R: float) -> float:
    """Mutual information per second at frame rate ``R``."""
    if not R > 0:
        raise ValueError(f"frame rate must be positive, got {R}")
    return R * mutual_information(rho_hat, n_eff) / n_eff


@dataclass(frozen=True)
class AnalysisConfig:
    retention: float = DEFAULT_RETENTION
    alignment: str = "ctw"
    clamp: float = DEFAULT_CLAMP
    variance_floor: float = VARIANCE_FLOOR
    ctw: CtwConfig = field(default_factory=CtwConfig)

    def __post_init__(self):
        if not 0.0 < self.retention <= 1.0:
            raise ValueError(f"retention must be in (0, 1], got {self.retention}")
        if self.alignment not in ALIGNMENT_METHODS:
            raise ValueError(f"alignment must be one of {ALIGNMENT_METHODS}")
        if not 0.0 < self.clamp < 1.0:
            raise ValueError("clamp must be in (0, 1)")

    def as_dict(self) -> dict:
        return {
            "retention": self.retention,
            "alignment": self.alignment,
            "clamp": self.clamp,
            "variance_floor": self.variance_floor,
            "ar_burn_in": AR_BURN_IN,
            "ctw_d": self.ctw.d,
            "ctw_ridge": self.ctw.ridge,
            "ctw_max_iters": self.ctw.max_iters,
            "ctw_tol": self.ctw.tol,
        }


def _informative_columns(seq: MotionSequence, floor: float) -> np.ndarray:
    return np.var(seq.frames, axis=0) >= floor


def align(x: MotionSequence, y: MotionSequence, cfg: AnalysisConfig) -> WarpPath:
    if cfg.alignment == "none":
        if x.n_frames != y.n_frames:
            raise AnalysisError(
                f"alignment 'none' needs equal lengths, got {x.n_frames} and {y.n_frames}"
            )
        return WarpPath.diagonal(x.n_frames)
    if cfg.alignment == "dtw":
        return dtw_align(x, y)
    return ctw_align(x, y, cfg.ctw)


def analyze_pair(
    x: MotionSequence, y: MotionSequence, cfg: AnalysisConfig = AnalysisConfig()
) -> ThroughputReport:
    """Throughput of ``x`` conditioned on ``y`` in bits per second.

    Both sequences are standardized, projected onto the principal directions
    of ``x``, and fitted component-wise with AR(2) models on their unaligned
    frames.  The alignment only decides which residual pairs are correlated.
    The result is directional: swap the arguments for ``TP(y | x)``.
    """
    if x.n_features != y.n_features:
        raise AnalysisError(f"feature count mismatch: {x.n_features} vs {y.n_features}")
    if x.frame_rate != y.frame_rate:
        raise AnalysisError(f"frame rate mismatch: {x.frame_rate} vs {y.frame_rate}")
    R = x.frame_rate

    keep = _informative_columns(x, cfg.variance_floor) & _informative_columns(y, cfg.variance_floor)
    if not keep.any():
        raise AnalysisError("no informative features")
    columns = np.flatnonzero(keep)
    xn, _ = normalize(x.select(columns), cfg.variance_floor)
    yn, _ = normalize(y.select(columns), cfg.variance_floor)

    basis = fit_pca(xn, cfg.retention)
    px, py = project(xn, basis), project(yn, basis)

    path = align(xn, yn, cfg)
    pairs = pair_indices(path, burn_in=AR_BURN_IN)
    n_eff = int(pairs.shape[0])
    if n_eff < 3:
        raise AnalysisError(f"only {n_eff} usable frame pairs after alignment")

    estimates, degenerate = [], []
    for j in range(basis.m):
        fx = fit_ar2(px.frames[:, j], cfg.variance_floor)
        fy = fit_ar2(py.frames[:, j], cfg.variance_floor)
        if fx.degenerate or fy.degenerate:
            degenerate.append(j)
            continue
        try:
            rho = residual_correlation(fx.residuals, fy.residuals, pairs, cfg.clamp)
        except DegenerateError:
            degenerate.append(j)
            continue
        estimates.append(
            ChannelEstimate(
                component_index=j,
                rho_hat=rho,
                n_eff=n_eff,
                mi_bits=mutual_information(rho, n_eff),
                tp_bps=throughput(rho, n_eff, R),
            )
        )
    if not estimates:
        raise AnalysisError("no retained components with usable residuals")

    return ThroughputReport(
        total_tp=math.fsum(e.tp_bps for e in estimates),
        components=estimates,
        retained_components=basis.m,
        variance_covered=basis.variance_covered,
        n_eff=n_eff,
        frame_rate=R,
        alignment_method=cfg.alignment,
        degenerate_components=degenerate,
        config=cfg.as_dict(),
    )


@dataclass(frozen=True)
class FittsTask:
    """Pointing task: intercept ``a`` (s), slope ``b`` (s/bit), distance ``D``, width ``W``."""

    a: float
    b: float
    D: float
    W: float

    def __post_init__(self):
        if not self.W > 0:
            raise ValueError("target width W must be positive")
        if not self.D >= 0:
            raise ValueError("distance D must be non-negative")
        if not self.b > 0:
            raise ValueError("slope b must be positive")

    @property
    def index_of_difficulty(self) -> float:
        return math.log2(1 + self.D / self.W)


def fitts_mt(task: FittsTask) -> float:
    """Movement time ``a + b * log2(1 + D/W)`` in seconds."""
    return task.a + task.b * task.index_of_difficulty


def fitts_ip(b: float) -> float:
    """Index of performance ``1/b`` in bits per second."""
    if not b > 0:
        raise ValueError("slope b must be positive")
    return 1.0 / b
