import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from motor_tp.armodel import design_matrix, fit_ar2, gaussian_entropy_rate
from motor_tp.errors import DegenerateError
from motor_tp.synth import SynthSpec, generate_pair
from oracles import normal_equations_ar2


def test_linear_ramp_is_degenerate():
    fit = fit_ar2(np.arange(50.0))
    assert fit.residuals.shape == (48,)
    np.testing.assert_allclose(fit.residuals, 0.0, atol=1e-9)
    assert fit.degenerate


def test_constant_series_is_degenerate():
    fit = fit_ar2(np.full(10, 3.0))
    np.testing.assert_allclose(fit.residuals, 0.0, atol=1e-12)
    assert fit.degenerate


def test_rejects_short_or_nonfinite():
    with pytest.raises(ValueError):
        fit_ar2([1.0, 2.0])
    with pytest.raises(ValueError):
        fit_ar2([1.0, np.nan, 2.0, 3.0])


def test_recovers_known_coefficients():
    x, _ = generate_pair(SynthSpec(beta=(0.1, 1.2, -0.5), rho=0.0, T=10000, seed=3))
    series = x.frames[:, 0]
    fit = fit_ar2(series)
    np.testing.assert_allclose(fit.coefficients, [0.1, 1.2, -0.5], atol=0.05)
    assert abs(fit.sigma2 - 1.0) < 0.1
    # independent solver on the same data
    np.testing.assert_allclose(fit.coefficients, normal_equations_ar2(series), rtol=1e-8, atol=1e-10)


def test_residuals_orthogonal_to_regressors(rng):
    series = np.cumsum(rng.normal(size=500)) * 0.1 + rng.normal(size=500)
    fit = fit_ar2(series)
    X, _ = design_matrix(series)
    for col in X.T:
        scale = np.linalg.norm(col) * np.linalg.norm(fit.residuals)
        assert abs(col @ fit.residuals) <= 1e-6 * scale


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_scale_equivariance(seed):
    series = np.random.default_rng(seed).normal(size=60).cumsum()
    a, b = fit_ar2(series), fit_ar2(2.0 * series)
    assert b.sigma2 == pytest.approx(4.0 * a.sigma2, rel=1e-8)
    assert b.beta1 == pytest.approx(a.beta1, rel=1e-7, abs=1e-9)
    assert b.beta2 == pytest.approx(a.beta2, rel=1e-7, abs=1e-9)
    assert b.beta0 == pytest.approx(2.0 * a.beta0, rel=1e-7, abs=1e-9)


def test_sigma2_is_mean_square_residual(rng):
    fit = fit_ar2(rng.normal(size=100))
    assert fit.sigma2 == pytest.approx(np.mean(fit.residuals**2), rel=1e-12)


@pytest.mark.parametrize(
    "sigma2, expected",
    [
        (1 / (2 * math.pi * math.e), 0.0),
        (4 / (2 * math.pi * math.e), 1.0),
        (1.0, 0.5 * math.log2(2 * math.pi * math.e)),
    ],
)
def test_entropy_rate_values(sigma2, expected):
    assert gaussian_entropy_rate(sigma2) == pytest.approx(expected, abs=1e-12)


def test_entropy_rate_closed_form_value():
    assert gaussian_entropy_rate(1.0) == pytest.approx(2.0471, abs=5e-5)


def test_entropy_rate_rejects_degenerate():
    with pytest.raises(DegenerateError, match="degenerate variance"):
        gaussian_entropy_rate(0.0)


@given(st.floats(1e-10, 1e6), st.floats(1.0001, 10.0))
def test_entropy_rate_increasing(s, factor):
    assert gaussian_entropy_rate(s * factor) > gaussian_entropy_rate(s)
