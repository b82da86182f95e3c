"""Exception hierarchy.

Two families matter to callers: ``InputError`` (bad specs, bad parameters;
CLI exit code 2) and ``NumericalError`` (a computation could not be carried
out or certified at the requested tolerance; CLI exit code 3).
"""


class CurveInvError(Exception):
    """Base class for all library errors."""


class InputError(CurveInvError):
    """Invalid user input (curve spec, parameters, flags)."""


class NumericalError(CurveInvError):
    """Numerical failure: tolerance not met, degenerate geometry, etc."""


# -- input / construction -------------------------------------------------

class UnknownPreset(InputError):
    pass


class InvalidParams(InputError):
    pass


class ParseError(InputError):
    pass


class TooFewSamples(InputError):
    pass


class RegularityViolation(InputError):
    """The tangent vector vanishes (or nearly vanishes) somewhere."""


class FramingMismatch(InputError):
    """Framing was built for a different curve."""


# -- numerical ------------------------------------------------------------

class ToleranceNotMet(NumericalError):
    """Refinement exhausted without reaching the requested tolerance."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class CurvatureVanishes(NumericalError):
    """Frenet frame (and torsion) undefined: curvature below threshold."""


class NearSelfIntersection(NumericalError):
    pass


class CurvesIntersect(NumericalError):
    pass


class OffsetTooLarge(NumericalError):
    pass


class CenterHit(NumericalError):
    """Inversion applied at (or numerically on) its own center."""


class CenterOnCurve(NumericalError):
    pass


class CoincidentPoints(NumericalError):
    pass


class CollinearPoints(NumericalError):
    pass


class DegenerateSphere(NumericalError):
    pass


class NonIntersecting(NumericalError):
    pass


class TubeViolation(NumericalError):
    """Inversion center sits inside (or too close to) the curvature tube."""


class SearchExhausted(NumericalError):
    pass


class DiagonalPoint(NumericalError):
    """Two-point chord map evaluated at coincident parameters."""
