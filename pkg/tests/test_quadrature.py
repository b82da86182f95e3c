import numpy as np
import pytest
from scipy.integrate import quad

from curveinv.errors import InvalidParams, ToleranceNotMet
from curveinv.quadrature import (QuadratureConfig, integrate_periodic,
                                 periodic_weights, refine_to_tolerance,
                                 spectral_derivative, trig_coefficients)


def test_config_validation():
    QuadratureConfig()  # defaults valid
    with pytest.raises(InvalidParams):
        QuadratureConfig(n=100)
    with pytest.raises(InvalidParams):
        QuadratureConfig(n=16)
    with pytest.raises(InvalidParams):
        QuadratureConfig(rule="midpoint")
    with pytest.raises(InvalidParams):
        QuadratureConfig(tol=-1.0)


@pytest.mark.parametrize("rule", ["trapezoid", "simpson"])
def test_periodic_rules_on_smooth_integrand(rule):
    ref = quad(lambda x: np.exp(np.sin(x)), 0, 2 * np.pi, limit=200)[0]
    u = 2 * np.pi * np.arange(64) / 64
    val = integrate_periodic(np.exp(np.sin(u)), rule=rule)
    assert abs(val - ref) < 1e-12


def test_weights_sum():
    for rule in ("trapezoid", "simpson"):
        w = periodic_weights(64, rule)
        assert w.sum() == pytest.approx(64.0)


def test_refine_converges():
    q = QuadratureConfig(n=32, refinement=3, tol=1e-10)
    value, err, n_used = refine_to_tolerance(
        lambda n: integrate_periodic(np.exp(np.sin(2 * np.pi * np.arange(n) / n))),
        q, q.tol)
    assert err <= 1e-10
    assert n_used in (64, 128, 256)


def test_refine_raises_when_not_converging():
    q = QuadratureConfig(n=32, refinement=2, tol=1e-12)
    with pytest.raises(ToleranceNotMet):
        refine_to_tolerance(lambda n: 1.0 / n, q, q.tol)


def test_refine_zero_passes_single_eval():
    q = QuadratureConfig(n=64, refinement=0)
    value, err, n_used = refine_to_tolerance(lambda n: float(n), q, q.tol)
    assert (value, err, n_used) == (64.0, 0.0, 64)


def test_spectral_derivative_exact_for_trig():
    n = 64
    u = 2 * np.pi * np.arange(n) / n
    f = np.sin(3 * u) + 0.5 * np.cos(5 * u)
    df = 3 * np.cos(3 * u) - 2.5 * np.sin(5 * u)
    assert np.abs(spectral_derivative(f) - df).max() < 1e-12


def test_spectral_derivative_periodic_rescale():
    n = 128
    period = 4.0
    u = period * np.arange(n) / n
    f = np.sin(2 * np.pi * u / period)
    df = (2 * np.pi / period) * np.cos(2 * np.pi * u / period)
    assert np.abs(spectral_derivative(f, period) - df).max() < 1e-12


def test_trig_coefficients_reconstruct():
    n = 32
    u = 2 * np.pi * np.arange(n) / n
    f = 1.0 + 2 * np.cos(u) - 0.7 * np.sin(4 * u)
    a, b = trig_coefficients(f)
    assert a[0] == pytest.approx(1.0, abs=1e-12)
    assert a[1] == pytest.approx(2.0, abs=1e-12)
    assert b[4] == pytest.approx(-0.7, abs=1e-12)
    k = np.arange(len(a))
    recon = (np.cos(np.outer(u, k)) @ a) + (np.sin(np.outer(u, k)) @ b)
    assert np.abs(recon - f).max() < 1e-12
