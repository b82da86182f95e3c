"""Frenet frames, curvature and torsion profiles.

Frames are computed from the raw parametrization; the formulas are
parametrization invariant, so no arc-length resampling is involved in
pointwise queries.
"""
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import CurvatureVanishes
from .quadrature import TWO_PI

# Frame threshold: curvature below 1e-8 / L counts as undefined.
FRAME_KAPPA_FACTOR = 1e-8
# Nowhere-vanishing predicate: curvature below 1e-6 * (2*pi / L) counts as
# a flat point.  The scale 2*pi/L is the curvature of the circle of the
# same length.
FLAT_KAPPA_FACTOR = 1e-6


@dataclass(frozen=True)
class FrenetFrame:
    """Orthonormal right-handed frame with curvature and torsion."""

    e1: np.ndarray
    e2: np.ndarray
    e3: np.ndarray
    kappa: float
    tau: float


@dataclass(frozen=True)
class FrameArrays:
    """Vectorized Frenet data at many parameters."""

    f: np.ndarray
    f1: np.ndarray
    speed: np.ndarray
    e1: np.ndarray
    e2: np.ndarray
    e3: np.ndarray
    kappa: np.ndarray
    tau: np.ndarray


@dataclass(frozen=True)
class CurvatureProfile:
    u: np.ndarray
    s: np.ndarray
    kappa: np.ndarray
    tau: np.ndarray
    min_kappa: float
    min_kappa_location: float
    min_kappa_refined: float
    nowhere_vanishing: bool


def frame_threshold(curve):
    return FRAME_KAPPA_FACTOR / curve.length()


def flat_threshold(curve):
    return FLAT_KAPPA_FACTOR * TWO_PI / curve.length()


def _raw_frames(derivs):
    f, f1, f2, f3 = derivs
    speed = np.linalg.norm(f1, axis=-1)
    cross = np.cross(f1, f2)
    ncross = np.linalg.norm(cross, axis=-1)
    kappa = ncross / speed ** 3
    with np.errstate(divide="ignore", invalid="ignore"):
        e1 = f1 / speed[..., None]
        e3 = cross / ncross[..., None]
        tau = np.einsum('...i,...i->...', cross, f3) / ncross ** 2
    e2 = np.cross(e3, e1)
    return f, f1, speed, e1, e2, e3, kappa, tau


def frame_arrays(curve, u, kappa_threshold=None):
    """Frenet data at an array of parameters; raises if curvature vanishes."""
    out = FrameArrays(*_raw_frames(curve.derivatives(np.atleast_1d(u), 3)))
    thr = frame_threshold(curve) if kappa_threshold is None else kappa_threshold
    if out.kappa.min() < thr:
        i = int(out.kappa.argmin())
        raise CurvatureVanishes(
            f"curvature {out.kappa[i]:.3e} below threshold {thr:.3e} "
            f"at u={np.atleast_1d(u)[i]:.6f}")
    return out


def grid_frames(curve, n, kappa_threshold=None):
    return frame_arrays(curve, curve.grid(n), kappa_threshold)


def frenet_at(curve, u, kappa_threshold=None):
    """Frenet frame at a single parameter value.

    e1 is the unit tangent, e2 the principal normal, e3 = e1 x e2, with
    kappa = |f' x f''| / |f'|^3 and tau = det(f', f'', f''') / |f' x f''|^2.
    Raises CurvatureVanishes below the threshold (default 1e-8 / length).
    """
    fr = frame_arrays(curve, [float(u)], kappa_threshold)
    return FrenetFrame(fr.e1[0], fr.e2[0], fr.e3[0],
                       float(fr.kappa[0]), float(fr.tau[0]))


def _kappa_squared(curve, u):
    f, f1, f2 = curve.derivatives(np.atleast_1d(u), 2)[:3]
    cross = np.cross(f1, f2)
    s2 = np.einsum('ij,ij->i', f1, f1)
    return float(np.einsum('ij,ij->i', cross, cross)[0] / s2[0] ** 3)


def frenet_scan(curve, n, kappa_threshold=None):
    """Curvature/torsion profile at n uniform arc-length samples.

    Vanishing curvature is reported (tau becomes NaN there), never raised.
    ``min_kappa`` is the sampled minimum; ``min_kappa_refined`` additionally
    minimizes curvature between the samples, and the nowhere-vanishing
    predicate compares that refined minimum to the threshold.
    """
    if n < 16:
        raise ValueError("frenet_scan needs n >= 16")
    L = curve.length()
    s = L * np.arange(n) / n
    u = curve.parameter_at_arclength(s)
    f, f1, speed, e1, e2, e3, kappa, tau = _raw_frames(curve.derivatives(u, 3))
    thr = flat_threshold(curve) if kappa_threshold is None else kappa_threshold
    tau = np.where(kappa < frame_threshold(curve), np.nan, tau)

    i = int(kappa.argmin())
    du = (u[(i + 1) % n] - u[i - 1]) % curve.period
    lo, hi = u[i - 1], u[i - 1] + du
    res = minimize_scalar(lambda x: _kappa_squared(curve, x), bounds=(lo, hi),
                          method="bounded", options={"xatol": 1e-12})
    refined = min(float(kappa[i]), float(np.sqrt(max(res.fun, 0.0))))

    return CurvatureProfile(
        u=u, s=s, kappa=kappa, tau=tau,
        min_kappa=float(kappa[i]),
        min_kappa_location=float(u[i]),
        min_kappa_refined=refined,
        nowhere_vanishing=bool(refined > thr),
    )


def profile_csv_rows(profile):
    """Rows (u, s, kappa, tau) for CSV export."""
    return np.column_stack([profile.u, profile.s, profile.kappa, profile.tau])
