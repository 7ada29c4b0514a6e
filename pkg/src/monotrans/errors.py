"""Exception types shared across the library."""


class MonotransError(Exception):
    """Base class for every error raised by this package."""


# ---------------------------------------------------------------- functions

class LengthMismatch(MonotransError):
    """Breakpoint and value lists have different lengths."""


class NonIncreasingBreakpoints(MonotransError):
    """Breakpoints are not strictly increasing (or two are too close)."""


class NonFiniteValue(MonotransError):
    """A breakpoint, value, or parameter is NaN or infinite."""


class OutOfDomain(MonotransError):
    """Evaluation point lies outside the function's interval."""


# -------------------------------------------------------------------- costs

class InvalidExponent(MonotransError):
    """Power exponent below 1 would break convexity."""


class InvalidCostParameter(MonotransError):
    """Cost parameter outside its admissible range."""


class NonConvexSample(MonotransError):
    """Sampled cost fails the finite-difference convexity/monotonicity gate."""


class NonPositiveEpsilon(MonotransError):
    """Superlinearization weight must be strictly positive."""


# ------------------------------------------------------------- rearrangement

class MassMismatch(MonotransError):
    """Measure mass does not match the length of the target domain."""


class DisconnectedSupport(MonotransError):
    """Measure support is not a single interval."""


class TransportMismatch(MonotransError):
    """Candidate transport does not have the same image measure as u."""


class CriticalLevel(MonotransError):
    """Level coincides with a critical value (or leaves the image)."""


class FlatTransport(MonotransError):
    """Transport derivative vanishes at the requested level."""


# ------------------------------------------------------------------ energies

class IncompatibleProfile(MonotransError):
    """Multiplicity profile cannot be aligned with the transport map."""


class FlatPiecePresent(MonotransError):
    """Operation requires all slopes nonzero, but a flat piece exists."""


class NotNonInjective(MonotransError):
    """Subinterval contains a band where the function is injective."""


class InequalityViolated(MonotransError):
    """The rearrangement inequality came out negative beyond tolerance.

    This indicates an implementation fault, never a property of the input;
    the offending report is attached for post-mortem.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


# ------------------------------------------------------------- approximation

class DepthExceeded(MonotransError):
    """Requested dyadic depth is finer than the sample grid supports."""


class NonInvertibleCost(MonotransError):
    """Cost lacks an inverse (or its derivative vanishes at zero)."""


class ProbeAtCriticalLevel(MonotransError):
    """Probe point sits on a critical cut or a flat transport interval."""


# ------------------------------------------------------------ regularization

class NonPositiveJ(MonotransError):
    """Lipschitz constant of the inf-convolution must be positive."""


class GridMismatch(MonotransError):
    """Grid functions are not defined on the same sample grid."""
