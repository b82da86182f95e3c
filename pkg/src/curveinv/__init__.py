"""Classical and conformal invariants of closed space curves.

Writhe, twist, total torsion, linking and self-linking numbers, plus the
sphere-inversion machinery (osculating spheres, curvature tube, normal
rotation integrals) needed to verify their conformal transformation laws
numerically.
"""
from . import errors
from .curves import (ClosedCurve, FourierCurve, Framing, curve_from_samples,
                     framing_from_samples, load_curve, make_preset, mirror_curve,
                     offset_curve, preset_names, principal_framing,
                     resample_arclength, rotating_framing, serialize_curve)
from .frenet import (CurvatureProfile, FrenetFrame, frenet_at, frenet_scan)
from .invariants import (CalugareanuReport, InvariantReport, LinkingResult,
                         calugareanu_report, linking_number, self_linking,
                         total_torsion, twist, writhe)
from .conformal import (AT_INFINITY, Circle3, Inversion, NormalPair, SphereOrPlane,
                        TubeReport, angle_variation, circle_through,
                        curvature_tube_distance, find_admissible_center,
                        intersection_circle, invert_curve, invert_point,
                        osculating_circle, osculating_sphere, regularize_curvature,
                        sphere_normals, sphere_pencil_residual, tangent_circle)
from .indicatrix import (IndicatrixCurve, SphericalSample, cycle_area_check,
                         gauss_map, swept_area, swept_area_determinant,
                         tangent_indicatrix, writhe_surface_area)
from .kernels import backend
from .quadrature import QuadratureConfig

__version__ = "0.1.0"

__all__ = [
    "AT_INFINITY", "CalugareanuReport", "Circle3", "ClosedCurve",
    "CurvatureProfile", "FourierCurve", "Framing", "FrenetFrame",
    "IndicatrixCurve", "InvariantReport", "Inversion", "LinkingResult",
    "NormalPair", "QuadratureConfig", "SphereOrPlane", "SphericalSample",
    "TubeReport", "angle_variation", "backend", "calugareanu_report",
    "circle_through", "curvature_tube_distance", "curve_from_samples",
    "cycle_area_check", "errors", "find_admissible_center", "framing_from_samples",
    "frenet_at", "frenet_scan", "gauss_map", "intersection_circle",
    "invert_curve", "invert_point", "linking_number", "load_curve",
    "make_preset", "mirror_curve", "offset_curve", "osculating_circle",
    "osculating_sphere", "preset_names", "principal_framing",
    "regularize_curvature", "resample_arclength", "rotating_framing",
    "self_linking", "serialize_curve", "sphere_normals",
    "sphere_pencil_residual", "swept_area", "swept_area_determinant",
    "tangent_circle", "tangent_indicatrix", "total_torsion", "twist",
    "writhe", "writhe_surface_area",
]
