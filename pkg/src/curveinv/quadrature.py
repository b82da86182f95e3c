"""Periodic quadrature, refinement driver, and spectral differentiation.

The trapezoid rule on a uniform periodic grid converges spectrally for
smooth periodic integrands, so it is the default everywhere.  Simpson
weights are provided as an alternative rule.  Double (writhe-type)
integrals converge more slowly because their integrand has a kink across
the diagonal; they get their own convergence tolerance ``tol_double``.
"""
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParams, ToleranceNotMet

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class QuadratureConfig:
    """Grid resolution and refinement policy for all integrals.

    Parameters
    ----------
    n : int
        Base grid resolution per circle factor.  Must be a power of two,
        at least 32, so refined grids nest.
    refinement : int
        Maximum number of grid doublings.
    tol : float
        Convergence tolerance on successive refinements of 1-D integrals.
    tol_double : float
        Same, for double integrals (diagonal kink limits them to roughly
        O(h^2), so the attainable tolerance is coarser).
    rule : str
        "trapezoid" or "simpson".
    """

    n: int = 512
    refinement: int = 2
    tol: float = 1e-6
    tol_double: float = 1e-4
    rule: str = "trapezoid"

    def __post_init__(self):
        if self.n < 32 or (self.n & (self.n - 1)) != 0:
            raise InvalidParams(f"n must be a power of two >= 32, got {self.n}")
        if self.refinement < 0:
            raise InvalidParams("refinement must be >= 0")
        if self.tol <= 0 or self.tol_double <= 0:
            raise InvalidParams("tolerances must be positive")
        if self.rule not in ("trapezoid", "simpson"):
            raise InvalidParams(f"unknown rule {self.rule!r}")


def periodic_weights(n, rule="trapezoid"):
    """Quadrature weights on the uniform periodic grid (step factor excluded)."""
    if rule == "trapezoid":
        return np.ones(n)
    w = np.empty(n)
    w[0::2] = 2.0 / 3.0
    w[1::2] = 4.0 / 3.0
    return w


def refine_to_tolerance(evaluate, q, tol):
    """Evaluate ``evaluate(n)`` on doubling grids until two passes agree.

    Returns (value, estimated_error, n_used).  With ``refinement=0`` a
    single evaluation is returned with estimated_error 0.0 (no estimate).
    Raises ToleranceNotMet when the final pair of refinements still
    disagrees by more than ``tol``.
    """
    n = q.n
    value = evaluate(n)
    if q.refinement == 0:
        return value, 0.0, n
    err = np.inf
    for _ in range(q.refinement):
        n *= 2
        new = evaluate(n)
        err = abs(new - value)
        value = new
        if err <= tol:
            return value, err, n
    raise ToleranceNotMet(
        f"refinement exhausted at n={n}: last change {err:.3e} > tol {tol:.3e}",
        report=(value, err, n),
    )


def uniform_grid(n, period=TWO_PI):
    return period * np.arange(n) / n


def spectral_derivative(samples, period=TWO_PI):
    """d/du of a smooth periodic sampled function, via the FFT.

    ``samples`` has shape (n,) or (n, d); the derivative of the
    trigonometric interpolant is returned at the same nodes.  The Nyquist
    mode is dropped (its derivative is odd and unrepresentable).
    """
    samples = np.asarray(samples, float)
    n = samples.shape[0]
    k = np.fft.rfftfreq(n, d=1.0 / n)
    factor = 1j * k * (TWO_PI / period)
    if n % 2 == 0:
        factor[-1] = 0.0
    if samples.ndim == 1:
        return np.fft.irfft(np.fft.rfft(samples) * factor, n)
    spec = np.fft.rfft(samples, axis=0) * factor[:, None]
    return np.fft.irfft(spec, n, axis=0)


def trig_coefficients(samples):
    """Cosine/sine coefficients of the trigonometric interpolant.

    For n uniform periodic samples returns (a, b) with
    f(u) = sum_k a_k cos(k u) + b_k sin(k u),  k = 0..n//2.
    For even n the Nyquist cosine coefficient is halved as required for
    interpolation, and its sine partner is zero.
    """
    samples = np.asarray(samples, float)
    n = samples.shape[0]
    spec = np.fft.rfft(samples, axis=0)
    a = 2.0 * spec.real / n
    b = -2.0 * spec.imag / n
    a[0] /= 2.0
    b[0] = 0.0
    if n % 2 == 0:
        a[-1] /= 2.0
        b[-1] = 0.0
    return a, b


def integrate_periodic(values, period=TWO_PI, rule="trapezoid"):
    """Integral over one period from uniform samples."""
    n = len(values)
    return float(np.sum(periodic_weights(n, rule) * values) * period / n)
