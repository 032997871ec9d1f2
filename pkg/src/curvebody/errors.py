"""Exception hierarchy shared by every module."""


class CurveBodyError(Exception):
    """Base class for all errors raised by curvebody."""


class SignMismatch(CurveBodyError):
    """Operands belong to different spaces (sigma differs)."""


class NonInvertible(CurveBodyError):
    """A ring element with zero modulus was inverted."""


class ZeroDivisor(NonInvertible):
    """A nonzero double number of the form a(1 +- u) was inverted."""


class NonInvertibleDenominator(NonInvertible):
    """The denominator of the vector addition rule is not invertible."""


class SqrtDomain(CurveBodyError):
    """Square root requested for a ring element that is not real positive."""


class NullNorm(CurveBodyError):
    """Lightlike element: the norm vanishes."""


class WrongSheet(CurveBodyError):
    """Hyperboloid point on the lower sheet (X0 <= 0)."""


class NotUnit(CurveBodyError):
    """An isometry biquaternion does not satisfy A * bar(A) = 1."""


class ChartDomain(CurveBodyError):
    """Chart point outside the Beltrami domain (1 + sigma |v|^2 <= 0)."""


class EquatorSingularity(ChartDomain):
    """Sphere point with X0 = 0, i.e. at infinity of the gnomonic chart."""


class ChartInfinity(ChartDomain):
    """A relative chart vector is undefined (separation reaches pi/2)."""


class NumericalDomain(CurveBodyError):
    """A cosine-like quantity left its admissible range beyond the guard."""


class DegenerateCM(CurveBodyError):
    """The mass-weighted sum of embedding points has (nearly) null norm."""


class CoincidentPoints(CurveBodyError):
    """The relative axis is undefined because the particles coincide."""


class PotentialSingularity(CurveBodyError):
    """The potential was evaluated at a singular separation.

    When raised from an integration, ``trajectory`` holds the samples
    recorded so far.
    """

    def __init__(self, message, trajectory=None, last_index=None):
        super().__init__(message)
        self.trajectory = trajectory if trajectory is not None else []
        self.last_index = last_index


class ChartExit(CurveBodyError):
    """A trajectory left the chart guard region.

    ``trajectory`` carries the samples recorded before the exit and
    ``last_index`` the step index of the last valid sample.
    """

    def __init__(self, message, trajectory=None, last_index=None):
        super().__init__(message)
        self.trajectory = trajectory if trajectory is not None else []
        self.last_index = last_index


class ConfigError(CurveBodyError):
    """Base class for configuration problems."""


class ParseError(ConfigError):
    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class ValidationError(ConfigError):
    def __init__(self, key, message):
        super().__init__(f"{key}: {message}")
        self.key = key


class UnknownKey(ValidationError):
    def __init__(self, key):
        super().__init__(key, "unknown key")
