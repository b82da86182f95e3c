"""Spherical apparatus behind the writhe-torsion integrality: the two-point
chord map, tangent indicatrices, the swept semicircle surface, and the
signed-area integrality check."""
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import CurvatureVanishes, DiagonalPoint, NearSelfIntersection, ToleranceNotMet
from .frenet import frenet_scan, grid_frames
from .invariants import InvariantReport
from .quadrature import QuadratureConfig, periodic_weights, refine_to_tolerance

FOUR_PI = 4.0 * np.pi


@dataclass(frozen=True)
class SphericalSample:
    """Unit chord direction with its source parameters."""

    direction: np.ndarray
    s: float
    t: float


@dataclass(frozen=True)
class IndicatrixCurve:
    """Closed spherical polyline of (signed) unit tangents, sampled
    uniformly in arc length of the source curve."""

    points: np.ndarray
    sign: int
    arclengths: np.ndarray


def gauss_map(curve, s, t):
    """Unit chord direction (f(s) - f(t))/|f(s) - f(t)|."""
    period = curve.period
    if abs((s - t + period / 2) % period - period / 2) < 1e-12 * period:
        raise DiagonalPoint("chord map undefined at coincident parameters")
    f = curve.derivatives(np.array([s, t], float), 0)[0]
    chord = f[0] - f[1]
    return SphericalSample(chord / np.linalg.norm(chord), float(s), float(t))


def tangent_indicatrix(curve, sign, n):
    """Spherical curve of (sign) * unit tangent at n uniform arc-length
    samples, oriented by increasing arc length."""
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    L = curve.length()
    s = L * np.arange(n) / n
    u = curve.parameter_at_arclength(s)
    f1 = curve.derivatives(u, 1)[1]
    v = f1 / np.linalg.norm(f1, axis=1)[:, None]
    return IndicatrixCurve(sign * v, sign, s)


def writhe_surface_area(curve, q=QuadratureConfig()):
    """Signed spherical area swept by the chord map.

    Computed from the unit chord and its projected parameter derivatives;
    an implementation independent of the writhe integrand that must agree
    with 4*pi times the writhe.
    """
    L = curve.length()
    h = curve.period

    def evaluate(n):
        f, f1 = curve.grid_derivatives(n, 1)
        w = periodic_weights(n, q.rule)
        total, dmin = kernels.gauss_area_sum(
            np.ascontiguousarray(f), np.ascontiguousarray(f1), w)
        if dmin < 1e-9 * L:
            raise NearSelfIntersection(
                f"sample points {dmin:.3e} apart (length {L:.3e})")
        return total * (h / n) ** 2

    value, err, n_used = refine_to_tolerance(evaluate, q, q.tol_double * FOUR_PI)
    return InvariantReport(value, err, n_used)


def swept_area(curve, q=QuadratureConfig()):
    """Signed area of the semicircle surface joining the two tangent
    indicatrices: -2 * integral of tau ds.

    The angular integral is exact (the integrand reduces to -tau sin t),
    leaving a 1-D periodic quadrature; ``swept_area_determinant`` retains
    the raw surface-element route as a cross-check.
    """
    if not frenet_scan(curve, 256).nowhere_vanishing:
        raise CurvatureVanishes("swept surface undefined: curvature vanishes")
    h = curve.period

    def evaluate(n):
        fr = grid_frames(curve, n)
        w = periodic_weights(n, q.rule)
        return -2.0 * float(np.sum(w * fr.tau * fr.speed) * (h / n))

    value, err, n_used = refine_to_tolerance(evaluate, q, 2 * FOUR_PI * q.tol)
    return InvariantReport(value, err, n_used)


def swept_area_determinant(curve, n_s=512, n_t=64):
    """Raw surface-element evaluation of the swept area.

    w(s, t) = cos(t) e1 + sin(t) e2; the area element w . (w_s x w_t) is
    assembled from the frame derivatives and integrated (Simpson in t).
    Returns (area, max pointwise deviation from -tau sin t).
    """
    fr = grid_frames(curve, n_s)
    ts = np.linspace(0.0, np.pi, n_t + 1)
    # Simpson weights on [0, pi], n_t even
    wt = np.ones(n_t + 1)
    wt[1:-1:2] = 4.0
    wt[2:-1:2] = 2.0
    wt *= (np.pi / n_t) / 3.0
    de1 = fr.kappa[:, None] * fr.e2
    de2 = -fr.kappa[:, None] * fr.e1 + fr.tau[:, None] * fr.e3
    area = 0.0
    max_resid = 0.0
    for t, w in zip(ts, wt):
        ct, st = np.cos(t), np.sin(t)
        wvec = ct * fr.e1 + st * fr.e2
        ws = ct * de1 + st * de2
        wtv = -st * fr.e1 + ct * fr.e2
        det = np.einsum('ij,ij->i', wvec, np.cross(ws, wtv))
        max_resid = max(max_resid, float(np.abs(det + fr.tau * st).max()))
        area += w * float(np.sum(det * fr.speed) * (curve.period / n_s))
    return area, max_resid


@dataclass(frozen=True)
class CycleAreaResult:
    k: int
    residual: float
    area_chord: float
    area_swept: float


def cycle_area_check(curve, q=QuadratureConfig()):
    """Certify that (Area(chord surface) - Area(swept surface))/(4 pi) is an
    integer; that integer equals writhe + total torsion."""
    a_s = writhe_surface_area(curve, q)
    a_p = swept_area(curve, q)
    value = (a_s.value - a_p.value) / FOUR_PI
    k = int(round(value))
    residual = abs(value - k)
    if residual > 0.1:
        raise ToleranceNotMet(
            f"cycle area {value:.6f} is not near an integer multiple of 4 pi",
            report=(value, residual))
    return CycleAreaResult(k, residual, a_s.value, a_p.value)
