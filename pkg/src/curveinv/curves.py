"""Closed space curves: presets, Fourier/sampled representations, framings.

Every curve exposes position and derivatives up to third order.  Presets
carry closed-form derivatives; sampled and Fourier curves differentiate
their trigonometric interpolant, which is spectrally accurate for smooth
closed curves.  The parameter period is 2*pi for every representation
built here.
"""
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import (InvalidParams, OffsetTooLarge, ParseError, FramingMismatch,
                     RegularityViolation, ToleranceNotMet, TooFewSamples, UnknownPreset)
from .quadrature import TWO_PI, trig_coefficients, uniform_grid

_LENGTH_GRID = 4096


def _rows_norm(a):
    return np.sqrt(np.einsum('...i,...i->...', a, a))


class ClosedCurve:
    """A C^3 closed parametric curve.

    Subclasses implement ``derivatives(u, order)`` returning a tuple of
    ``order + 1`` arrays of shape (m, 3): position and derivatives with
    respect to the parameter.  Instances are immutable and safe to share.
    """

    period = TWO_PI

    def derivatives(self, u, order=3):
        raise NotImplementedError

    def position(self, u):
        scalar = np.isscalar(u) or getattr(u, "ndim", 1) == 0
        f = self.derivatives(u, order=0)[0]
        return f[0] if scalar else f

    def grid(self, n):
        return uniform_grid(n, self.period)

    def grid_derivatives(self, n, order=3):
        """Derivatives on the uniform n-point grid over one period."""
        return self.derivatives(self.grid(n), order)

    def length(self, n=_LENGTH_GRID):
        cached = getattr(self, "_length", None)
        if cached is None:
            speed = _rows_norm(self.grid_derivatives(n, 1)[1])
            cached = float(np.sum(speed) * self.period / n)
            self._length = cached
        return cached

    # -- arc length ------------------------------------------------------

    def _speed_series(self):
        """Truncated trig series of |f'| and of its antiderivative."""
        cached = getattr(self, "_speed_coef", None)
        if cached is not None:
            return cached
        speed = _rows_norm(self.grid_derivatives(_LENGTH_GRID, 1)[1])
        a, b = trig_coefficients(speed)
        mag = np.maximum(np.abs(a), np.abs(b))
        keep = np.nonzero(mag > 1e-16 * max(mag.max(), 1e-300))[0]
        kmax = int(keep.max()) + 1 if len(keep) else 1
        self._speed_coef = (a[:kmax].copy(), b[:kmax].copy())
        return self._speed_coef

    def arclength(self, u):
        """s(u), arc length from parameter 0, evaluated spectrally."""
        a, b = self._speed_series()
        u = np.asarray(u, float)
        k = np.arange(1, len(a))
        if len(k) == 0:
            return a[0] * u
        ku = np.multiply.outer(u, k)
        osc = (np.sin(ku) @ (a[1:] / k)) + ((1.0 - np.cos(ku)) @ (b[1:] / k))
        return a[0] * u + osc

    def parameter_at_arclength(self, s):
        """Inverse of ``arclength`` by Newton iteration (s may be an array)."""
        a, _ = self._speed_series()
        s = np.asarray(s, float)
        u = s / a[0]
        for _ in range(40):
            speed = _rows_norm(self.derivatives(u, 1)[1])
            du = (self.arclength(u) - s) / speed
            u = u - du
            if np.abs(du).max() < 1e-13 * self.period:
                return u
        raise ToleranceNotMet("arc-length parameter solve did not converge")

    def spec_dict(self):
        """Serializable curve spec; generic curves round-trip as samples."""
        pts = self.grid_derivatives(512, 0)[0]
        return {"type": "samples", "points": [[float(c) for c in p] for p in pts]}

    def spec_json(self):
        return json.dumps(self.spec_dict())


# -- presets ---------------------------------------------------------------

class PresetCurve(ClosedCurve):
    def __init__(self, name, params, evaluator):
        self.name = name
        self.params = dict(params)
        self._evaluator = evaluator

    def derivatives(self, u, order=3):
        u = np.atleast_1d(np.asarray(u))
        return self._evaluator(u)[: order + 1]

    def spec_dict(self):
        return {"type": "preset", "name": self.name, "params": self.params}


def _circle_evaluator(R):
    def derivs(u):
        c, s = np.cos(u), np.sin(u)
        z = np.zeros_like(u)
        return (np.stack([R * c, R * s, z], -1),
                np.stack([-R * s, R * c, z], -1),
                np.stack([-R * c, -R * s, z], -1),
                np.stack([R * s, -R * c, z], -1))
    return derivs


def _ellipse_evaluator(a, b):
    def derivs(u):
        c, s = np.cos(u), np.sin(u)
        z = np.zeros_like(u)
        return (np.stack([a * c, b * s, z], -1),
                np.stack([-a * s, b * c, z], -1),
                np.stack([-a * c, -b * s, z], -1),
                np.stack([a * s, -b * c, z], -1))
    return derivs


def _polar_xy(k, R, amp, zfun):
    """Planar polar curve rho(u) = R + amp*cos(k u), with optional height."""
    def derivs(u):
        c, s = np.cos(u), np.sin(u)
        ck, sk = np.cos(k * u), np.sin(k * u)
        rho = R + amp * ck
        r1 = -amp * k * sk
        r2 = -amp * k * k * ck
        r3 = amp * k ** 3 * sk
        z0, z1, z2, z3 = zfun(u)
        return (np.stack([rho * c, rho * s, z0], -1),
                np.stack([r1 * c - rho * s, r1 * s + rho * c, z1], -1),
                np.stack([r2 * c - 2 * r1 * s - rho * c,
                          r2 * s + 2 * r1 * c - rho * s, z2], -1),
                np.stack([r3 * c - 3 * r2 * s - 3 * r1 * c + rho * s,
                          r3 * s + 3 * r2 * c - 3 * r1 * s - rho * c, z3], -1))
    return derivs


def _flat_z(u):
    z = np.zeros_like(u)
    return z, z, z, z


def _torus_knot_evaluator(p, q, R, r):
    def derivs(u):
        cp, sp = np.cos(p * u), np.sin(p * u)
        cq, sq = np.cos(q * u), np.sin(q * u)
        rho = R + r * cq
        r1 = -r * q * sq
        r2 = -r * q * q * cq
        r3 = r * q ** 3 * sq
        return (np.stack([rho * cp, rho * sp, r * sq], -1),
                np.stack([r1 * cp - rho * p * sp,
                          r1 * sp + rho * p * cp,
                          r * q * cq], -1),
                np.stack([r2 * cp - 2 * r1 * p * sp - rho * p * p * cp,
                          r2 * sp + 2 * r1 * p * cp - rho * p * p * sp,
                          -r * q * q * sq], -1),
                np.stack([r3 * cp - 3 * r2 * p * sp - 3 * r1 * p * p * cp + rho * p ** 3 * sp,
                          r3 * sp + 3 * r2 * p * cp - 3 * r1 * p * p * sp - rho * p ** 3 * cp,
                          -r * q ** 3 * cq], -1))
    return derivs


def _build_circle(params):
    R = float(params.get("R", 1.0))
    if R <= 0:
        raise InvalidParams("circle needs R > 0")
    return _circle_evaluator(R), {"R": R}


def _build_ellipse(params):
    a = float(params.get("a", 2.0))
    b = float(params.get("b", 1.0))
    if a <= 0 or b <= 0:
        raise InvalidParams("ellipse needs a, b > 0")
    return _ellipse_evaluator(a, b), {"a": a, "b": b}


def _build_torus_knot(params):
    p = int(params.get("p", 2))
    q = int(params.get("q", 3))
    R = float(params.get("R", 2.0))
    r = float(params.get("r", 0.5))
    if p < 1 or q < 1:
        raise InvalidParams("torus_knot needs positive integers p, q")
    if math.gcd(p, q) != 1:
        raise InvalidParams(f"torus_knot needs gcd(p,q)=1, got gcd({p},{q})={math.gcd(p, q)}")
    if not 0 < r < R:
        raise InvalidParams(f"torus_knot needs 0 < r < R, got r={r}, R={R}")
    return _torus_knot_evaluator(p, q, R, r), {"p": p, "q": q, "R": R, "r": r}


def _build_flower(params):
    k = int(params.get("petals", 3))
    R = float(params.get("R", 1.0))
    amp = float(params.get("amplitude", 0.05))
    if k < 1:
        raise InvalidParams("planar_flower needs petals >= 1")
    if R <= 0 or amp < 0 or amp >= R:
        raise InvalidParams("planar_flower needs R > 0 and 0 <= amplitude < R")
    return _polar_xy(k, R, amp, _flat_z), {"petals": k, "R": R, "amplitude": amp}


def _build_twisted_unknot(params):
    amp = float(params.get("amplitude", 0.4))
    if not 0 < amp < 1:
        raise InvalidParams("twisted_unknot needs 0 < amplitude < 1")

    def zfun(u, A=amp):
        c2, s2 = np.cos(2 * u), np.sin(2 * u)
        return A * s2, 2 * A * c2, -4 * A * s2, -8 * A * c2

    return _polar_xy(2, 1.0, amp, zfun), {"amplitude": amp}


_PRESETS = {
    "circle": _build_circle,
    "ellipse": _build_ellipse,
    "torus_knot": _build_torus_knot,
    "planar_flower": _build_flower,
    "twisted_unknot": _build_twisted_unknot,
}

# The classic trefoil used throughout the test corpus.
_ALIASES = {"trefoil": ("torus_knot", {"p": 2, "q": 3, "R": 2.0, "r": 0.5})}


def preset_names():
    return sorted(_PRESETS) + sorted(_ALIASES)


def make_preset(name, params=None):
    """Build an analytic preset curve with exact derivatives to order 3."""
    params = dict(params or {})
    if name in _ALIASES:
        base, fixed = _ALIASES[name]
        if params:
            raise InvalidParams(f"preset {name!r} takes no parameters")
        evaluator, norm = _PRESETS[base](fixed)
        return PresetCurve(base, norm, evaluator)
    if name not in _PRESETS:
        raise UnknownPreset(f"unknown preset {name!r}; known: {', '.join(preset_names())}")
    evaluator, norm = _PRESETS[name](params)
    extra = set(params) - set(norm)
    if extra:
        raise InvalidParams(f"unexpected parameters for {name}: {sorted(extra)}")
    return PresetCurve(name, norm, evaluator)


# -- trigonometric (Fourier / sampled) curves -------------------------------

class FourierCurve(ClosedCurve):
    """Vector-valued trigonometric polynomial on [0, 2*pi).

    Coefficient arrays have shape (K, 3): row k multiplies cos(k u) and
    sin(k u) respectively.  Construction performs no validation; use
    ``load_curve`` / ``curve_from_samples`` for validated entry points.
    """

    def __init__(self, cos_coeffs, sin_coeffs, source_points=None):
        self.cos_coeffs = np.atleast_2d(np.asarray(cos_coeffs, float))
        self.sin_coeffs = np.atleast_2d(np.asarray(sin_coeffs, float))
        K = max(self.cos_coeffs.shape[0], self.sin_coeffs.shape[0])
        self.cos_coeffs = np.vstack([self.cos_coeffs,
                                     np.zeros((K - self.cos_coeffs.shape[0], 3))])
        self.sin_coeffs = np.vstack([self.sin_coeffs,
                                     np.zeros((K - self.sin_coeffs.shape[0], 3))])
        self.source_points = None if source_points is None else np.asarray(source_points, float)

    @classmethod
    def from_samples(cls, points):
        points = np.asarray(points, float)
        a = np.empty((points.shape[0] // 2 + 1, 3))
        b = np.empty_like(a)
        for j in range(3):
            a[:, j], b[:, j] = trig_coefficients(points[:, j])
        return cls(a, b, source_points=points)

    def _derivative_coeffs(self, order):
        k = np.arange(self.cos_coeffs.shape[0], dtype=float)
        a, b = self.cos_coeffs, self.sin_coeffs
        out = [(a, b)]
        for _ in range(order):
            a, b = k[:, None] * b, -k[:, None] * a
            out.append((a, b))
        return out

    def derivatives(self, u, order=3):
        u = np.atleast_1d(np.asarray(u, float))
        k = np.arange(self.cos_coeffs.shape[0], dtype=float)
        results = [np.zeros((len(u), 3)) for _ in range(order + 1)]
        coeffs = self._derivative_coeffs(order)
        for lo in range(0, len(u), 1024):
            sl = slice(lo, lo + 1024)
            ku = np.multiply.outer(u[sl], k)
            C, S = np.cos(ku), np.sin(ku)
            for d, (a, b) in enumerate(coeffs):
                results[d][sl] = C @ a + S @ b
        return tuple(results)

    def grid_derivatives(self, n, order=3):
        K = self.cos_coeffs.shape[0]
        if n < 2 * K:
            return self.derivatives(self.grid(n), order)
        spec0 = (self.cos_coeffs - 1j * self.sin_coeffs) * (n / 2.0)
        spec0[0] *= 2.0
        k = np.arange(K, dtype=float)
        out = []
        spec = spec0
        for d in range(order + 1):
            if d > 0:
                spec = spec * (1j * k)[:, None]
            full = np.zeros((n // 2 + 1, 3), complex)
            full[:K] = spec
            out.append(np.fft.irfft(full, n, axis=0))
        return tuple(out)

    def spec_dict(self):
        if self.source_points is not None:
            return {"type": "samples",
                    "points": [[float(c) for c in p] for p in self.source_points]}
        return {"type": "fourier",
                "cos": [[float(c) for c in row] for row in self.cos_coeffs],
                "sin": [[float(c) for c in row] for row in self.sin_coeffs]}


class MirrorCurve(ClosedCurve):
    """Reflection of a curve through the plane z = 0 (orientation kept)."""

    _FLIP = np.array([1.0, 1.0, -1.0])

    def __init__(self, base):
        self.base = base
        self.period = base.period

    def derivatives(self, u, order=3):
        return tuple(d * self._FLIP for d in self.base.derivatives(u, order))

    def grid_derivatives(self, n, order=3):
        return tuple(d * self._FLIP for d in self.base.grid_derivatives(n, order))


def mirror_curve(curve):
    """Mirror image through z = 0; an involution up to roundoff."""
    if isinstance(curve, MirrorCurve):
        return curve.base
    return MirrorCurve(curve)


# -- validation -------------------------------------------------------------

def _validate_curve(curve, n=512):
    f, f1 = curve.grid_derivatives(n, 1)
    if not np.isfinite(f).all() or not np.isfinite(f1).all():
        raise RegularityViolation("curve evaluator produced non-finite values")
    speed = _rows_norm(f1)
    scale = max(float(_rows_norm(f - f.mean(axis=0)).max()), 1e-300)
    if speed.min() <= 1e-10 * scale:
        raise RegularityViolation(
            f"|f'| vanishes at a grid point (min {speed.min():.3e})")
    # simple at sampling resolution: non-adjacent samples must not collide
    from . import kernels
    dmin = kernels.min_distance_offdiag(np.ascontiguousarray(f), exclude_neighbors=True)
    if dmin <= 1e-12 * scale:
        raise RegularityViolation("coincident non-adjacent sample points")
    return curve


def curve_from_samples(points):
    """Validated sampled curve (uniform in parameter, last point not repeated)."""
    points = np.asarray(points, float)
    if points.ndim != 2 or points.shape[1] != 3:
        raise ParseError("samples must be an (n, 3) array")
    if points.shape[0] < 16:
        raise TooFewSamples(f"need at least 16 samples, got {points.shape[0]}")
    if not np.isfinite(points).all():
        raise ParseError("samples contain non-finite values")
    return _validate_curve(FourierCurve.from_samples(points))


def load_curve(spec):
    """Build a validated curve from a CurveSpec (dict or JSON text)."""
    if isinstance(spec, (str, bytes)):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(spec, dict) or "type" not in spec:
        raise ParseError("curve spec must be an object with a 'type' field")
    kind = spec["type"]
    if kind == "preset":
        if "name" not in spec:
            raise ParseError("preset spec needs a 'name'")
        return make_preset(spec["name"], spec.get("params"))
    if kind == "samples":
        if "points" not in spec:
            raise ParseError("samples spec needs 'points'")
        try:
            points = np.asarray(spec["points"], float)
        except (TypeError, ValueError) as exc:
            raise ParseError(f"bad points array: {exc}") from exc
        return curve_from_samples(points)
    if kind == "fourier":
        try:
            cos = np.asarray(spec.get("cos", []), float)
            sin = np.asarray(spec.get("sin", []), float)
        except (TypeError, ValueError) as exc:
            raise ParseError(f"bad coefficient table: {exc}") from exc
        if cos.size == 0 and sin.size == 0:
            raise ParseError("fourier spec needs 'cos' and/or 'sin' coefficients")
        cos = cos.reshape(-1, 3) if cos.size else np.zeros((1, 3))
        sin = sin.reshape(-1, 3) if sin.size else np.zeros((1, 3))
        return _validate_curve(FourierCurve(cos, sin))
    raise ParseError(f"unknown curve spec type {kind!r}")


def serialize_curve(curve):
    return curve.spec_dict()


# -- arc-length resampling ---------------------------------------------------

def resample_arclength(curve, n):
    """Resample to n points uniform in arc length.

    The result is a sampled curve whose speed is constant to within 1e-6
    relative and whose length matches the input within 1e-8 relative.
    """
    L = curve.length()
    targets = L * np.arange(n) / n
    u = curve.parameter_at_arclength(targets)
    out = curve_from_samples(curve.derivatives(u, 0)[0])
    speed = _rows_norm(out.grid_derivatives(n, 1)[1])
    relvar = (speed.max() - speed.min()) / speed.mean()
    if relvar > 1e-6:
        raise ToleranceNotMet(f"resampled speed varies by {relvar:.3e} (> 1e-6)")
    if abs(out.length() - L) > 1e-8 * L:
        raise ToleranceNotMet("resampling did not preserve total length")
    return out


# -- framings and offsets -----------------------------------------------------

@dataclass(frozen=True, eq=False)
class Framing:
    """Unit normal field along a curve.

    ``kind`` is "principal" (Frenet normal, computed on demand) or
    "sampled" (an explicit field interpolated trigonometrically).
    """

    curve: ClosedCurve
    kind: str
    field: FourierCurve = None

    def normal_on_grid(self, n):
        if self.kind == "principal":
            from .frenet import frame_arrays
            return frame_arrays(self.curve, self.curve.grid(n)).e2
        return self.field.grid_derivatives(n, 0)[0]

    def normal_at(self, u):
        if self.kind == "principal":
            from .frenet import frame_arrays
            return frame_arrays(self.curve, np.atleast_1d(u)).e2
        return self.field.derivatives(np.atleast_1d(u), 0)[0]


def principal_framing(curve):
    """Frenet principal-normal framing (defined where curvature is positive)."""
    return Framing(curve, "principal")


def framing_from_samples(curve, normals):
    """Explicit framing from uniform samples of a unit normal field."""
    normals = np.asarray(normals, float)
    n = normals.shape[0]
    f1 = curve.grid_derivatives(n, 1)[1]
    norms = _rows_norm(normals)
    if np.abs(norms - 1).max() > 1e-10:
        raise InvalidParams("framing field is not unit length at the samples")
    t = f1 / _rows_norm(f1)[:, None]
    if np.abs(np.einsum('ij,ij->i', normals, t)).max() > 1e-10:
        raise InvalidParams("framing field is not orthogonal to the tangent")
    return Framing(curve, "sampled", FourierCurve.from_samples(normals))


def rotating_framing(curve, turns, n=512, phase=0.0):
    """Framing rotating ``turns`` full extra turns relative to the Frenet frame."""
    from .frenet import frame_arrays
    fr = frame_arrays(curve, curve.grid(n))
    ang = turns * curve.grid(n) * (TWO_PI / curve.period) + phase
    field = np.cos(ang)[:, None] * fr.e2 + np.sin(ang)[:, None] * fr.e3
    return framing_from_samples(curve, field)


def offset_reach(curve, n=512):
    """(1/max curvature, half doubly-critical self distance) sampled bounds."""
    from . import kernels
    f, f1, f2 = curve.grid_derivatives(n, 2)[:3]
    speed = _rows_norm(f1)
    kappa_max = (_rows_norm(np.cross(f1, f2)) / speed ** 3).max()
    t = f1 / speed[:, None]
    dc = kernels.doubly_critical_distance(np.ascontiguousarray(f), np.ascontiguousarray(t))
    return 1.0 / kappa_max, dc / 2.0


def offset_curve(curve, framing, epsilon, n=1024):
    """Push-off u -> f(u) + epsilon * e2(u) as a sampled curve."""
    if framing.curve is not curve:
        raise FramingMismatch("framing belongs to a different curve")
    r_osc, r_self = offset_reach(curve)
    bound = min(r_osc, r_self)
    if abs(epsilon) >= bound:
        which = "osculating radius" if r_osc <= r_self else "half self-distance"
        raise OffsetTooLarge(
            f"|epsilon|={abs(epsilon)} exceeds {which} bound {bound:.6g}")
    f = curve.grid_derivatives(n, 0)[0]
    return curve_from_samples(f + epsilon * framing.normal_on_grid(n))
