"""Sphere inversions and the conformal apparatus of closed curves.

Covers oriented circles and spheres, the sphere through an osculating
circle and an external point, its oriented normals, the rotation-angle
integral of that normal field, the curvature tube admissibility test,
and the inversion-plus-mirror construction that removes flat points.

Orientation bookkeeping follows a single convention: the sphere through
the osculating circle and P is oriented so that the cap not containing P
induces the circle's own orientation on its boundary.  Everything
downstream (normals at the curve point and at P, rotation signs) derives
from that one choice, which reduces to "normal = binormal" in the plane
limit.
"""
from dataclasses import dataclass

import numpy as np

from .curves import ClosedCurve, mirror_curve
from .errors import (CenterHit, CenterOnCurve, CoincidentPoints, CollinearPoints,
                     CurvatureVanishes, DegenerateSphere, InvalidParams,
                     NonIntersecting, SearchExhausted, ToleranceNotMet,
                     TubeViolation)
from .frenet import frame_arrays, frame_threshold, frenet_at, frenet_scan
from .quadrature import (QuadratureConfig, periodic_weights, refine_to_tolerance,
                         spectral_derivative, uniform_grid)

#: Sentinel accepted wherever a point at infinity is meaningful.
AT_INFINITY = None

TWO_PI = 2.0 * np.pi


def _unit(v):
    return v / np.linalg.norm(v)


def _is_infinity(p):
    return p is None or (isinstance(p, str) and p == "inf")


# -- inversion ---------------------------------------------------------------

@dataclass(frozen=True)
class Inversion:
    """Inversion x -> center + radius^2 (x - center)/|x - center|^2."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", np.asarray(self.center, float))
        if self.center.shape != (3,) or not np.isfinite(self.center).all():
            raise InvalidParams("inversion center must be a finite 3-vector")
        if not self.radius > 0:
            raise InvalidParams("inversion radius must be positive")


def invert_point(inv, x):
    """Image of a point; fixed exactly on the inversion sphere."""
    x = np.asarray(x, float)
    if x.shape != (3,) or not np.isfinite(x).all():
        raise InvalidParams("point must be a finite 3-vector")
    d = x - inv.center
    d2 = d @ d
    if d2 <= (1e-12 * inv.radius) ** 2:
        raise CenterHit("point coincides with the inversion center")
    return inv.center + (inv.radius ** 2 / d2) * d


class InvertedCurve(ClosedCurve):
    """Image of a closed curve under an inversion, with analytic derivatives
    obtained by differentiating the inversion along the curve."""

    def __init__(self, base, inversion):
        self.base = base
        self.inversion = inversion
        self.period = base.period

    def _transform(self, derivs):
        f, f1, f2, f3 = derivs
        P = self.inversion.center
        r2 = self.inversion.radius ** 2
        d = f - P
        p = np.einsum('ij,ij->i', d, d)[:, None]
        p1 = 2 * np.einsum('ij,ij->i', d, f1)[:, None]
        p2 = 2 * (np.einsum('ij,ij->i', f1, f1) + np.einsum('ij,ij->i', d, f2))[:, None]
        p3 = 2 * (3 * np.einsum('ij,ij->i', f1, f2) + np.einsum('ij,ij->i', d, f3))[:, None]
        g = P + r2 * d / p
        g1 = r2 * (f1 / p - d * p1 / p ** 2)
        g2 = r2 * (f2 / p - 2 * f1 * p1 / p ** 2 - d * p2 / p ** 2
                   + 2 * d * p1 ** 2 / p ** 3)
        g3 = r2 * (f3 / p - 3 * f2 * p1 / p ** 2 - 3 * f1 * p2 / p ** 2
                   + 6 * f1 * p1 ** 2 / p ** 3 - d * p3 / p ** 2
                   + 6 * d * p2 * p1 / p ** 3 - 6 * d * p1 ** 3 / p ** 4)
        return g, g1, g2, g3

    def derivatives(self, u, order=3):
        return self._transform(self.base.derivatives(u, 3))[: order + 1]

    def grid_derivatives(self, n, order=3):
        return self._transform(self.base.grid_derivatives(n, 3))[: order + 1]


def invert_curve(inv, curve, guard_samples=512):
    """Image curve under an inversion whose center avoids the curve."""
    f = curve.grid_derivatives(guard_samples, 0)[0]
    dmin = np.sqrt(np.min(np.einsum('ij,ij->i', f - inv.center, f - inv.center)))
    if dmin <= 1e-6 * inv.radius:
        raise CenterOnCurve(
            f"inversion center is {dmin:.3e} from the curve (radius {inv.radius})")
    return InvertedCurve(curve, inv)


def arclength_ratio(inv, curve, u):
    """d(arc length of image)/d(arc length of source) at parameters u.

    This is the conformal stretch factor radius^2/|f - center|^2 of the
    inversion restricted to the curve.
    """
    f = curve.derivatives(np.atleast_1d(u), 0)[0]
    d = f - inv.center
    return inv.radius ** 2 / np.einsum('ij,ij->i', d, d)


# -- circles, lines, spheres, planes ------------------------------------------

@dataclass(frozen=True)
class Circle3:
    """Oriented circle (traversal counterclockwise around ``axis``), or a
    line through infinity (``kind == "line"``, oriented by ``axis``)."""

    kind: str
    center: np.ndarray
    radius: float
    axis: np.ndarray

    @classmethod
    def circle(cls, center, radius, axis):
        return cls("circle", np.asarray(center, float), float(radius),
                   _unit(np.asarray(axis, float)))

    @classmethod
    def line(cls, point, direction):
        return cls("line", np.asarray(point, float), np.inf,
                   _unit(np.asarray(direction, float)))

    def basis(self):
        a = self.axis
        helper = np.array([1.0, 0.0, 0.0]) if abs(a[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
        eu = _unit(np.cross(a, helper))
        return eu, np.cross(a, eu)

    def points(self, n=64):
        """Sample points; for a line, a symmetric parameter range around
        its anchor point (used only for residual checks)."""
        if self.kind == "line":
            t = np.linspace(-1.0, 1.0, n)
            return self.center + t[:, None] * self.axis
        eu, ev = self.basis()
        th = TWO_PI * np.arange(n) / n
        return (self.center + self.radius *
                (np.cos(th)[:, None] * eu + np.sin(th)[:, None] * ev))

    def point_distance(self, p):
        """Exact point-to-circle (or point-to-line) distance."""
        w = np.asarray(p, float) - self.center
        if self.kind == "line":
            return float(np.linalg.norm(w - (w @ self.axis) * self.axis))
        h = w @ self.axis
        rho = np.linalg.norm(w - h * self.axis)
        return float(np.hypot(h, rho - self.radius))

    def tangent_at(self, p):
        """Unit tangent of the oriented circle at a point on (or near) it."""
        if self.kind == "line":
            return self.axis
        w = np.asarray(p, float) - self.center
        return _unit(np.cross(self.axis, w - (w @ self.axis) * self.axis))


@dataclass(frozen=True)
class SphereOrPlane:
    """Oriented sphere (unit normal = orientation * (p - center)/radius) or
    oriented plane (kind == "plane"; ``axis`` is the unit normal)."""

    kind: str
    center: np.ndarray
    radius: float
    axis: np.ndarray
    orientation: float

    @classmethod
    def sphere(cls, center, radius, orientation):
        return cls("sphere", np.asarray(center, float), float(radius),
                   np.zeros(3), float(orientation))

    @classmethod
    def plane(cls, point, normal):
        return cls("plane", np.asarray(point, float), np.inf,
                   _unit(np.asarray(normal, float)), 1.0)

    def normal_at(self, p):
        if self.kind == "plane":
            return self.axis
        return self.orientation * _unit(np.asarray(p, float) - self.center)

    def signed_distance(self, p):
        p = np.asarray(p, float)
        if self.kind == "plane":
            return float((p - self.center) @ self.axis)
        return float(np.linalg.norm(p - self.center) - self.radius)


def circle_through(x, y, z):
    """Oriented circumcircle of three points; ``z = None`` gives the line
    through x and y."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    if _is_infinity(z):
        if np.linalg.norm(y - x) < 1e-12:
            raise CoincidentPoints("line through two coincident points")
        return Circle3.line(x, y - x)
    z = np.asarray(z, float)
    scale = max(np.linalg.norm(y - x), np.linalg.norm(z - x), np.linalg.norm(z - y))
    if scale < 1e-300:
        raise CoincidentPoints("all three points coincide")
    for p, r in ((x, y), (x, z), (y, z)):
        if np.linalg.norm(r - p) < 1e-12 * scale:
            raise CoincidentPoints("two of the three points coincide")
    a = y - x
    b = z - x
    nrm = np.cross(a, b)
    n2 = nrm @ nrm
    if np.sqrt(n2) < 1e-10 * np.linalg.norm(a) * np.linalg.norm(b):
        raise CollinearPoints("three collinear points do not span a circle")
    center = x + np.cross((a @ a) * b - (b @ b) * a, nrm) / (2 * n2)
    return Circle3.circle(center, np.linalg.norm(center - x), nrm)


def tangent_circle(curve, u, y):
    """Circle tangent to the curve at f(u), through y, oriented by the
    tangent there.  ``y = None`` (infinity) gives the tangent line."""
    f, f1 = (d[0] for d in curve.derivatives([float(u)], 1))
    v = _unit(f1)
    if _is_infinity(y):
        return Circle3.line(f, v)
    y = np.asarray(y, float)
    d = y - f
    dist = np.linalg.norm(d)
    if dist < 1e-12 * max(1.0, np.linalg.norm(f)):
        raise CoincidentPoints("target point coincides with the curve point")
    nrm = np.cross(v, d)
    if np.linalg.norm(nrm) < 1e-12 * dist:
        return Circle3.line(f, v)
    axis = _unit(nrm)
    m = _unit(d - (d @ v) * v)
    radius = (d @ d) / (2 * (d @ m))
    return Circle3.circle(f + radius * m, radius, axis)


def osculating_circle(curve, u):
    """Oriented osculating circle: center f + e2/kappa, radius 1/kappa."""
    fr = frenet_at(curve, u)
    f = curve.position(float(u))
    return Circle3.circle(f + fr.e2 / fr.kappa, 1.0 / fr.kappa, fr.e3)


def osculating_sphere(curve, u, P):
    """Sphere through the osculating circle at u and the point P.

    P = None means infinity, giving the osculating plane.  The orientation
    follows the cap convention described in the module docstring; in the
    plane limit the normal is the Frenet binormal.
    """
    fr = frenet_at(curve, u)
    f = curve.position(float(u))
    rho = 1.0 / fr.kappa
    circ_center = f + fr.e2 * rho
    if _is_infinity(P):
        return SphereOrPlane.plane(f, fr.e3)
    P = np.asarray(P, float)
    circ = Circle3.circle(circ_center, rho, fr.e3)
    if circ.point_distance(P) <= 1e-9 * rho:
        raise DegenerateSphere("point lies on the osculating circle")
    q = circ_center - P
    beta = -(fr.e3 @ q)
    if abs(beta) < 1e-10 * np.linalg.norm(q):
        # P in the osculating plane: the sphere degenerates to that plane,
        # oriented by the side of the cap away from P.
        A = q @ q - rho * rho
        return SphereOrPlane.plane(f, np.sign(A) * fr.e3)
    lam = (rho * rho - q @ q) / (2 * (fr.e3 @ q))
    return SphereOrPlane.sphere(circ_center + lam * fr.e3,
                                np.hypot(rho, lam), -np.sign(beta))


@dataclass(frozen=True)
class NormalPair:
    """Oriented unit normals of the osculating sphere at the curve point
    and at P, plus the normal of the plane the rotation happens in."""

    n_at_x: np.ndarray
    n_at_P: np.ndarray
    rotation_plane_normal: np.ndarray


def _sphere_normal_arrays(curve, P, u):
    """Vectorized oriented normals (at x and at P) and rotation drift.

    Returns (n_x, n_P, drift_rate, frames) where drift_rate is the
    signed rate g/R accounting for the motion of the base point along
    the sphere; subtracting drift_rate * e1 from dn/ds leaves the pure
    rotation of the sphere family.
    """
    P = np.asarray(P, float)
    fr = frame_arrays(curve, u)
    rho = 1.0 / fr.kappa
    c = fr.f + fr.e2 * rho[:, None]
    cmP = c - P
    beta = -np.einsum('ij,ij->i', fr.e3, cmP)
    A = np.einsum('ij,ij->i', cmP, cmP) - rho ** 2
    den_x = np.sqrt(4 * beta ** 2 + (fr.kappa * A) ** 2)
    n_x = (2 * beta[:, None] * fr.e2 + (fr.kappa * A)[:, None] * fr.e3) / den_x[:, None]
    den_P = np.sqrt(4 * beta ** 2 * rho ** 2 + A ** 2)
    n_P = (A[:, None] * fr.e3 - 2 * beta[:, None] * (P - c)) / den_P[:, None]
    drift = -2 * beta / den_P
    return n_x, n_P, drift, fr


def sphere_normals(curve, u, P):
    """Oriented normal pair of the sphere through the osculating circle
    at u and the point P (n_at_P is None for the plane variant)."""
    if _is_infinity(P):
        fr = frenet_at(curve, u)
        return NormalPair(fr.e3, None, fr.e1)
    sph = osculating_sphere(curve, u, P)
    if sph.kind == "plane":
        fr = frenet_at(curve, u)
        return NormalPair(sph.axis, None, fr.e1)
    n_x, n_P, _, fr = _sphere_normal_arrays(curve, np.asarray(P, float),
                                            np.array([float(u)]))
    return NormalPair(n_x[0], n_P[0], fr.e1[0])


def normal_field(curve, P, n):
    """Oriented sphere normals at the curve points of the uniform grid."""
    return _sphere_normal_arrays(curve, P, curve.grid(n))[0]


def normal_field_at_center(curve, P, n):
    """Oriented sphere normals at P, sampled over the uniform grid."""
    return _sphere_normal_arrays(curve, P, curve.grid(n))[1]


def normal_rotation_rate(curve, P, n):
    """(dn/ds, rotation part of dn/ds, frames) on the uniform grid.

    The sampled field is differentiated spectrally; subtracting the
    tangential drift of the base point isolates the sphere family's own
    rotation, which is orthogonal to the curve tangent.
    """
    u = curve.grid(n)
    n_x, _, drift, fr = _sphere_normal_arrays(curve, np.asarray(P, float), u)
    flips = np.einsum('ij,ij->i', n_x[:-1], n_x[1:]) < 0
    if flips.any():
        raise ToleranceNotMet(
            "sphere normal field under-resolved (sign flip between samples); "
            "increase the grid or move the center away from the curvature tube")
    dn_ds = spectral_derivative(n_x, curve.period) / fr.speed[:, None]
    rotation = dn_ds - drift[:, None] * fr.e1
    return dn_ds, rotation, n_x, fr


def angle_variation(curve, P, q=QuadratureConfig()):
    """Total rotation angle of the oriented sphere normal along the curve:
    integral of v . (n x dn/ds) ds.

    Requires nowhere-vanishing curvature and a center outside the
    curvature tube.
    """
    if not frenet_scan(curve, 256).nowhere_vanishing:
        raise CurvatureVanishes("angle variation undefined: curvature vanishes")
    if not _is_infinity(P):
        P = np.asarray(P, float)
        tube = curvature_tube_distance(curve, P, 256)
        if not tube.admissible:
            raise TubeViolation(
                f"center is {tube.distance:.4g} from the curvature tube "
                f"(needs > {tube.delta:.4g})")

    def evaluate(n):
        if _is_infinity(P):
            # plane variant: the sphere normal is the binormal field
            fr = frame_arrays(curve, curve.grid(n))
            n_x = fr.e3
            dn_ds = spectral_derivative(n_x, curve.period) / fr.speed[:, None]
        else:
            dn_ds, _, n_x, fr = normal_rotation_rate(curve, P, n)
        integrand = np.einsum('ij,ij->i', fr.e1, np.cross(n_x, dn_ds)) * fr.speed
        w = periodic_weights(n, q.rule)
        return float(np.sum(w * integrand) * (curve.period / n))

    value, err, n_used = refine_to_tolerance(evaluate, q, q.tol)
    from .invariants import InvariantReport
    return InvariantReport(value, err, n_used)


# -- curvature tube ------------------------------------------------------------

@dataclass(frozen=True)
class TubeReport:
    """Distance from a point to the sampled union of osculating circles."""

    distance: float
    argmin_u: float
    admissible: bool
    n: int
    delta: float


def curvature_tube_distance(curve, P, n, delta=None):
    """Min over n sampled osculating circles of the exact point-to-circle
    distance.  Samples where the curvature is numerically zero contribute
    the distance to the tangent line (the circle's limit).
    """
    P = np.asarray(P, float)
    if delta is None:
        delta = 1e-3 * curve.length()
    u = uniform_grid(n, curve.period)
    f, f1, f2 = curve.derivatives(u, 2)[:3]
    speed = np.linalg.norm(f1, axis=1)
    e1 = f1 / speed[:, None]
    cross = np.cross(f1, f2)
    ncross = np.linalg.norm(cross, axis=1)
    kappa = ncross / speed ** 3
    thr = frame_threshold(curve)
    w = P - f
    dist = np.empty(n)
    flat = kappa < thr
    if flat.any():
        wf = w[flat]
        proj = wf - np.einsum('ij,ij->i', wf, e1[flat])[:, None] * e1[flat]
        dist[flat] = np.linalg.norm(proj, axis=1)
    ok = ~flat
    if ok.any():
        e3 = cross[ok] / ncross[ok][:, None]
        e2 = np.cross(e3, e1[ok])
        rho = 1.0 / kappa[ok]
        centers = f[ok] + e2 * rho[:, None]
        wc = P - centers
        h = np.einsum('ij,ij->i', wc, e3)
        inplane = np.linalg.norm(wc - h[:, None] * e3, axis=1)
        dist[ok] = np.hypot(h, inplane - rho)
    i = int(dist.argmin())
    d = float(dist[i])
    return TubeReport(d, float(u[i]), d > delta, n, float(delta))


def find_admissible_center(curve, trials=64, delta=None, seed=0,
                           base_radius=None, direction=None, cone=None,
                           tube_samples=256):
    """Deterministic search for an inversion center outside the curvature
    tube.

    Candidates are drawn (seeded) on spheres of increasing radius around
    the centroid, starting at ``base_radius`` (default 1.5 diameters).
    ``direction`` with ``cone`` (radians) restricts candidates to a cone,
    used by the flat-point regularization to stay near the mirror axis.
    """
    if trials < 1:
        raise InvalidParams("trials must be >= 1")
    if delta is None:
        delta = 1e-3 * curve.length()
    f = curve.grid_derivatives(256, 0)[0]
    centroid = f.mean(axis=0)
    diameter = max(float(np.linalg.norm(f.max(0) - f.min(0))), 1e-300)
    radius = base_radius if base_radius is not None else 1.5 * diameter
    rng = np.random.default_rng(seed)
    for trial in range(trials):
        if direction is None:
            dirn = rng.standard_normal(3)
            dirn /= np.linalg.norm(dirn)
        else:
            axis = _unit(np.asarray(direction, float))
            if cone:
                perp = rng.standard_normal(3)
                perp -= (perp @ axis) * axis
                perp /= np.linalg.norm(perp)
                ang = cone * rng.uniform(0.0, 1.0)
                dirn = np.cos(ang) * axis + np.sin(ang) * perp
            else:
                dirn = axis
        P = centroid + radius * dirn
        if curvature_tube_distance(curve, P, tube_samples, delta).admissible:
            return P
        radius *= 1.15
    raise SearchExhausted(
        f"no center with tube distance > {delta:.4g} in {trials} trials")


def regularize_curvature(curve, distance_factor, trials=64, seed=0):
    """Replace flat points by composing a far inversion with the mirror map.

    The inversion center sits at distance_factor * diameter along the
    z axis (with fixed-size lateral nudges when the axis itself is not
    admissible), so the inversion limits to the reflection through z = 0
    and the composition approaches the input as the factor grows; the
    radius equals the distance from the center to the curve.  The image
    has strictly positive curvature whenever the center avoids the
    curvature tube.
    """
    f = curve.grid_derivatives(512, 0)[0]
    centroid = f.mean(axis=0)
    diameter = float(np.linalg.norm(f.max(0) - f.min(0)))
    delta = 0.02 * curve.length()
    rng = np.random.default_rng(seed)
    for trial in range(trials):
        axis = np.array([0.0, 0.0, 1.0 if trial % 2 == 0 else -1.0])
        lateral = np.zeros(3)
        if trial >= 2:
            # lateral nudge independent of the factor, so the limiting
            # reflection plane stays z = 0
            ang = rng.uniform(0.0, TWO_PI)
            lateral = diameter * rng.uniform(0.2, 1.0) * np.array(
                [np.cos(ang), np.sin(ang), 0.0])
        P = centroid + distance_factor * diameter * axis + lateral
        if not curvature_tube_distance(curve, P, 256, delta).admissible:
            continue
        radius = float(np.sqrt(np.min(np.einsum('ij,ij->i', f - P, f - P))))
        image = invert_curve(Inversion(P, radius), curve)
        return mirror_curve(image)
    raise SearchExhausted(
        f"no admissible far center along the mirror axis in {trials} trials")


# -- sphere pencils -------------------------------------------------------------

def _sphere_sphere_circle(s1, s2):
    dvec = s2.center - s1.center
    D = np.linalg.norm(dvec)
    scale = max(s1.radius, s2.radius)
    if D < 1e-12 * scale and abs(s1.radius - s2.radius) < 1e-12 * scale:
        return None  # identical spheres
    if D < 1e-15 * scale:
        raise NonIntersecting("concentric spheres of different radii")
    axis = dvec / D
    d1 = (D * D + s1.radius ** 2 - s2.radius ** 2) / (2 * D)
    h2 = s1.radius ** 2 - d1 * d1
    if h2 <= 0:
        raise NonIntersecting("spheres do not meet in a circle")
    return Circle3.circle(s1.center + d1 * axis, np.sqrt(h2), axis)


def _sphere_plane_circle(sph, pl):
    d = (sph.center - pl.center) @ pl.axis
    h2 = sph.radius ** 2 - d * d
    if h2 <= 0:
        raise NonIntersecting("sphere does not meet the plane in a circle")
    return Circle3.circle(sph.center - d * pl.axis, np.sqrt(h2), pl.axis)


def intersection_circle(a, b):
    """Intersection of two spheres/planes; None when they coincide."""
    if a.kind == "sphere" and b.kind == "sphere":
        return _sphere_sphere_circle(a, b)
    if a.kind == "plane" and b.kind == "plane":
        if abs(abs(a.axis @ b.axis) - 1) < 1e-12:
            return None
        direction = _unit(np.cross(a.axis, b.axis))
        # a point on both planes, found in the span of the two normals
        A = np.array([a.axis, b.axis, direction])
        rhs = np.array([a.axis @ a.center, b.axis @ b.center, 0.0])
        return Circle3.line(np.linalg.solve(A, rhs), direction)
    sph, pl = (a, b) if a.kind == "sphere" else (b, a)
    return _sphere_plane_circle(sph, pl)


def hausdorff_between_circles(c1, c2, samples=64):
    """Symmetric sampled Hausdorff distance between circles (or lines)."""
    d12 = max(c2.point_distance(p) for p in c1.points(samples))
    d21 = max(c1.point_distance(p) for p in c2.points(samples))
    return max(d12, d21)


def sphere_pencil_residual(curve, u, h, P, samples=64):
    """Distance between the intersection of nearby osculating spheres and
    the tangent circle through P.

    The intersection circle of the spheres at u and u + h converges to
    the tangent circle at first order in h; the returned value is their
    sampled Hausdorff distance (0.0 when the sphere family is constant).
    """
    s1 = osculating_sphere(curve, u, P)
    s2 = osculating_sphere(curve, u + h, P)
    circ = intersection_circle(s1, s2)
    if circ is None:
        return 0.0
    return hausdorff_between_circles(circ, tangent_circle(curve, u, P), samples)
