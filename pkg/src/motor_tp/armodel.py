"""Second-order autoregressive fits and the Gaussian entropy of their residuals."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateError

VARIANCE_FLOOR = 1e-12
# relative singular-value cut for the minimum-norm least-squares solution
RCOND = 1e-10


@dataclass(frozen=True, eq=False)
class Ar2Fit:
    """Least-squares AR(2) fit ``x_t = beta0 + beta1 x_{t-1} + beta2 x_{t-2} + r_t``.

    ``residuals[k]`` belongs to source frame ``k + 2``.
    """

    beta0: float
    beta1: float
    beta2: float
    residuals: np.ndarray
    sigma2: float
    degenerate: bool

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([self.beta0, self.beta1, self.beta2])

    @property
    def n(self) -> int:
        return self.residuals.shape[0]


def design_matrix(series: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Regressors ``[1, x_{t-1}, x_{t-2}]`` and targets ``x_t`` for t = 2..T-1."""
    T = series.shape[0]
    X = np.column_stack([np.ones(T - 2), series[1:-1], series[:-2]])
    return X, series[2:]


def fit_ar2(series, variance_floor: float = VARIANCE_FLOOR) -> Ar2Fit:
    """Fit an AR(2) model with intercept by least squares.

    Collinear regressors (constant or affine series) are handled with the
    minimum-norm solution; the residuals are unique either way.
    """
    x = np.asarray(series, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError(f"series must be 1-D, got shape {x.shape}")
    if x.shape[0] < 3:
        raise ValueError(f"AR(2) needs at least 3 values, got {x.shape[0]}")
    if not np.isfinite(x).all():
        raise ValueError("series contains non-finite values")

    X, target = design_matrix(x)
    coef, *_ = np.linalg.lstsq(X, target, rcond=RCOND)
    residuals = target - X @ coef
    sigma2 = float(np.mean(residuals**2))
    residuals.setflags(write=False)
    return Ar2Fit(
        beta0=float(coef[0]),
        beta1=float(coef[1]),
        beta2=float(coef[2]),
        residuals=residuals,
        sigma2=sigma2,
        degenerate=sigma2 < variance_floor,
    )


def gaussian_entropy_rate(sigma2: float, variance_floor: float = VARIANCE_FLOOR) -> float:
    """Differential entropy in bits per frame of N(0, sigma2): ``0.5 * log2(2*pi*e*sigma2)``.

    Multiply by the number of regression targets for the sequence-level value.
    """
    if not sigma2 >= variance_floor:
        raise DegenerateError("degenerate variance")
    return 0.5 * math.log2(2.0 * math.pi * math.e * sigma2)
