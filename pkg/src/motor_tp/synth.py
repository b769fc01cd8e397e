"""Synthetic sequence pairs with known AR(2) dynamics and innovation correlation.

Random numbers come from ``numpy.random.default_rng(seed)`` (PCG64).  For each
component in turn the generator draws one ``(2, T + 102)`` block of standard
normals: the first two columns seed the pre-sample values, the rest become
innovations.  The first 100 generated frames are discarded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter, lfiltic

from .mocap_io import MotionSequence

BURN_FRAMES = 100

Knots = tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class SynthSpec:
    """Parameters for :func:`generate_pair`.

    ``warp`` holds monotone knots ``(u, v)`` in ``[0, 1]^2`` mapping relative
    output time ``u`` of the warped y to relative source time ``v``; it must
    start at ``(0, 0)`` and end at ``(1, 1)``.  ``warp_length`` sets the
    warped y's frame count (default ``T``).
    """

    beta: tuple[float, float, float] = (0.1, 1.2, -0.5)
    rho: float = 0.9
    T: int = 1000
    p_components: int = 1
    frame_rate: float = 120.0
    seed: int = 0
    warp: Knots | None = None
    warp_length: int | None = None

    def __post_init__(self):
        b0, b1, b2 = (float(b) for b in self.beta)
        object.__setattr__(self, "beta", (b0, b1, b2))
        if not is_stable(b1, b2):
            raise ValueError(f"AR(2) coefficients ({b1}, {b2}) are not stationary")
        if not -1.0 < self.rho < 1.0:
            raise ValueError(f"rho must lie in (-1, 1), got {self.rho}")
        if self.T < 3:
            raise ValueError("T must be at least 3")
        if self.p_components < 1:
            raise ValueError("p_components must be at least 1")
        if not self.frame_rate > 0:
            raise ValueError("frame_rate must be positive")
        if self.warp is not None:
            knots = tuple((float(u), float(v)) for u, v in self.warp)
            object.__setattr__(self, "warp", knots)
            u, v = np.array(knots).T
            if len(knots) < 2 or knots[0] != (0.0, 0.0) or knots[-1] != (1.0, 1.0):
                raise ValueError("warp knots must run from (0, 0) to (1, 1)")
            if (np.diff(u) <= 0).any() or (np.diff(v) <= 0).any():
                raise ValueError("warp knots must be strictly increasing")
        if self.warp_length is not None and self.warp_length < 3:
            raise ValueError("warp_length must be at least 3")

    @property
    def y_length(self) -> int:
        if self.warp is None:
            return self.T
        return self.warp_length if self.warp_length is not None else self.T


def is_stable(beta1: float, beta2: float) -> bool:
    """Stationarity triangle of an AR(2) process."""
    return abs(beta2) < 1 and beta2 + beta1 < 1 and beta2 - beta1 < 1


def stationary_variance(beta1: float, beta2: float, innovation_var: float = 1.0) -> float:
    return innovation_var * (1 - beta2) / ((1 + beta2) * ((1 - beta2) ** 2 - beta1**2))


def _ar2_filter(beta, innovations, x_prev, x_prev2):
    b0, b1, b2 = beta
    a = [1.0, -b1, -b2]
    zi = lfiltic([1.0], a, y=[x_prev, x_prev2])
    out, _ = lfilter([1.0], a, b0 + innovations, zi=zi)
    return out


def _apply_warp(series: np.ndarray, knots: Knots, length: int) -> np.ndarray:
    T = series.shape[0]
    u, v = np.array(knots).T
    source_time = np.interp(np.linspace(0.0, 1.0, length), u, v) * (T - 1)
    return np.interp(source_time, np.arange(T), series)


def true_warp(spec: SynthSpec) -> np.ndarray:
    """Fractional y index aligned with each x frame under ``spec.warp``.

    Identity when no warp is set.
    """
    t = np.arange(spec.T, dtype=np.float64)
    if spec.warp is None:
        return t
    u, v = np.array(spec.warp).T
    rel = np.interp(t / (spec.T - 1), v, u)
    return rel * (spec.y_length - 1)


def random_warp(rng: np.random.Generator, n_knots: int = 4, strength: float = 0.6) -> Knots:
    """Random monotone piecewise-linear warp.

    Interior knots are equally spaced in output time; the local speed of each
    segment is drawn from ``[1 - strength, 1 + strength]`` and renormalized.
    """
    speeds = rng.uniform(1 - strength, 1 + strength, size=n_knots + 1)
    v = np.concatenate([[0.0], np.cumsum(speeds)])
    v /= v[-1]
    u = np.linspace(0.0, 1.0, n_knots + 2)
    return tuple(zip(u.tolist(), v.tolist()))


def generate_pair(spec: SynthSpec) -> tuple[MotionSequence, MotionSequence]:
    """Two sequences whose components are AR(2) with correlated innovations.

    Innovation pairs are bivariate normal with unit variances and correlation
    ``spec.rho``, independent across frames and components.  The optional warp
    is applied to y only.
    """
    rng = np.random.default_rng(spec.seed)
    b0, b1, b2 = spec.beta
    mean = b0 / (1 - b1 - b2)
    scale = math.sqrt(stationary_variance(b1, b2))
    mix = math.sqrt(1.0 - spec.rho**2)
    n_total = spec.T + BURN_FRAMES

    xs, ys = [], []
    for _ in range(spec.p_components):
        z = rng.standard_normal((2, n_total + 2))
        ex = z[0]
        ey = spec.rho * z[0] + mix * z[1]
        x0 = mean + scale * ex[:2]
        y0 = mean + scale * ey[:2]
        x = _ar2_filter(spec.beta, ex[2:], x0[1], x0[0])[BURN_FRAMES:]
        y = _ar2_filter(spec.beta, ey[2:], y0[1], y0[0])[BURN_FRAMES:]
        if spec.warp is not None:
            y = _apply_warp(y, spec.warp, spec.y_length)
        xs.append(x)
        ys.append(y)

    labels = [f"c{j}" for j in range(spec.p_components)]
    return (
        MotionSequence(spec.frame_rate, labels, np.column_stack(xs)),
        MotionSequence(spec.frame_rate, labels, np.column_stack(ys)),
    )


def analytic_tp(rho: float, R: float, n: int) -> float:
    """Throughput formula evaluated at the true correlation (the estimator's target)."""
    if not -1.0 < rho < 1.0:
        raise ValueError(f"rho must lie in (-1, 1), got {rho}")
    return -(R / 2) * math.log2(1 - rho**2) - (R / (2 * n)) * math.log2(n)
