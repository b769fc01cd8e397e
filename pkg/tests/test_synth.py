import math

import numpy as np
import pytest

from motor_tp.armodel import fit_ar2
from motor_tp.synth import (
    SynthSpec,
    analytic_tp,
    generate_pair,
    is_stable,
    random_warp,
    stationary_variance,
    true_warp,
)


def innovations(series, beta):
    b0, b1, b2 = beta
    return series[2:] - b0 - b1 * series[1:-1] - b2 * series[:-2]


@pytest.mark.parametrize("rho", [1.0, -1.0, 1.5])
def test_rejects_invalid_rho(rho):
    with pytest.raises(ValueError, match="rho"):
        SynthSpec(rho=rho)


@pytest.mark.parametrize("beta", [(0, 1.0, 0.5), (0, 0.2, -1.0), (0, -1.5, 0.6)])
def test_rejects_unstable_coefficients(beta):
    assert not is_stable(beta[1], beta[2])
    with pytest.raises(ValueError, match="stationary"):
        SynthSpec(beta=beta)


def test_near_perfect_correlation_gives_matching_sequences():
    x, y = generate_pair(SynthSpec(rho=1 - 1e-9, T=2000, seed=5))
    rms_diff = np.sqrt(np.mean((x.frames - y.frames) ** 2))
    assert rms_diff < 1e-3 * np.sqrt(np.mean(x.frames**2))


def test_zero_correlation_innovations():
    beta = (0.1, 1.2, -0.5)
    small = 0
    for seed in range(100):
        x, y = generate_pair(SynthSpec(beta=beta, rho=0.0, T=10000, seed=seed))
        ex, ey = innovations(x.frames[:, 0], beta), innovations(y.frames[:, 0], beta)
        small += abs(np.corrcoef(ex, ey)[0, 1]) < 0.05
    assert small >= 99


def test_innovation_correlation_matches_rho():
    beta = (0.0, 0.5, 0.2)
    x, y = generate_pair(SynthSpec(beta=beta, rho=0.7, T=20000, seed=2, p_components=2))
    for j in range(2):
        ex, ey = innovations(x.frames[:, j], beta), innovations(y.frames[:, j], beta)
        assert np.corrcoef(ex, ey)[0, 1] == pytest.approx(0.7, abs=0.02)
        assert np.var(ex) == pytest.approx(1.0, rel=0.05)
    # components are independent of each other
    e0, e1 = innovations(x.frames[:, 0], beta), innovations(x.frames[:, 1], beta)
    assert abs(np.corrcoef(e0, e1)[0, 1]) < 0.05


def test_deterministic_for_fixed_seed():
    spec = SynthSpec(T=500, p_components=3, seed=7, warp=random_warp(np.random.default_rng(7)))
    a, b = generate_pair(spec), generate_pair(spec)
    assert a[0] == b[0] and a[1] == b[1]
    c = generate_pair(SynthSpec(T=500, p_components=3, seed=8))
    assert not np.array_equal(a[0].frames, c[0].frames)


def test_stationary_variance():
    beta = (0.1, 1.2, -0.5)
    x, _ = generate_pair(SynthSpec(beta=beta, T=50000, seed=9))
    expected = stationary_variance(1.2, -0.5)
    assert x.frames[:, 0].var() == pytest.approx(expected, rel=0.10)


def test_fit_recovers_generator_coefficients():
    x, _ = generate_pair(SynthSpec(beta=(-0.3, 0.6, 0.25), T=10000, seed=12))
    fit = fit_ar2(x.frames[:, 0])
    np.testing.assert_allclose(fit.coefficients, [-0.3, 0.6, 0.25], atol=0.05)


def test_warp_applies_to_y_only():
    knots = ((0.0, 0.0), (0.5, 0.3), (1.0, 1.0))
    plain = generate_pair(SynthSpec(T=400, seed=1))
    warped = generate_pair(SynthSpec(T=400, seed=1, warp=knots, warp_length=500))
    assert warped[0] == plain[0]
    assert warped[1].n_frames == 500
    # first and last frames are pinned by the warp
    assert warped[1].frames[0, 0] == plain[1].frames[0, 0]
    assert warped[1].frames[-1, 0] == pytest.approx(plain[1].frames[-1, 0])


def test_true_warp_inverts_the_distortion():
    spec = SynthSpec(T=101, seed=0, warp=((0.0, 0.0), (0.5, 0.25), (1.0, 1.0)), warp_length=201)
    tw = true_warp(spec)
    assert tw[0] == 0.0 and tw[-1] == pytest.approx(200.0)
    # x frame 25 (source time 0.25) sits at output time 0.5
    assert tw[25] == pytest.approx(100.0)


def test_warp_knots_validated():
    with pytest.raises(ValueError):
        SynthSpec(warp=((0.0, 0.0), (0.5, 0.6), (0.4, 0.7), (1.0, 1.0)))
    with pytest.raises(ValueError):
        SynthSpec(warp=((0.0, 0.1), (1.0, 1.0)))


def test_random_warp_is_monotone(rng):
    knots = np.array(random_warp(rng, n_knots=6))
    assert tuple(knots[0]) == (0.0, 0.0) and tuple(knots[-1]) == (1.0, 1.0)
    assert np.all(np.diff(knots, axis=0) > 0)


def test_analytic_tp_values():
    # -(120/2) log2(1 - 0.81) = 60 * 2.39593 = 143.756 bps as n grows
    assert analytic_tp(0.9, 120, 10**12) == pytest.approx(143.7557, abs=1e-3)
    assert analytic_tp(0.0, 120, 1024) == pytest.approx(-(120 / 2048) * 10)
    assert analytic_tp(0.0, 120, 1024) < 0
    single = analytic_tp(0.6, 120, 5000)
    assert 4 * single == pytest.approx(sum(analytic_tp(0.6, 120, 5000) for _ in range(4)))


def test_analytic_tp_rejects_unit_rho():
    with pytest.raises(ValueError):
        analytic_tp(1.0, 120, 100)
