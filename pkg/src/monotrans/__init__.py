"""Monotone rearrangement of 1D functions and the sharp convexity inequality.

For a continuous piecewise-affine u on [a, b] the package constructs the
image measure of Lebesgue measure under u, the unique non-decreasing map t
with the same image measure, and the branch-count profile n, then verifies
the inequality  integral f(|u'|) >= integral f(n t')  with exact closed
forms, an independent level-set oracle, an approximation pipeline for
sampled inputs, and capped Lipschitz envelopes for count profiles.
"""

from .approx import (
    ApproximantSequenceReport,
    LevelReport,
    SampledFunction,
    build_approximant,
    convergence_report,
    dyadic_average,
    multiplicity_liminf_check,
)
from .costs import ConvexCost, check_convex_nondecreasing, make_cost, superlinearize
from .energy import (
    BandContribution,
    InequalityReport,
    InjectivityGain,
    coarea_energy,
    dirichlet_energy,
    injectivity_gain,
    rearranged_energy,
    verify_inequality,
)
from .errors import (
    CriticalLevel,
    DepthExceeded,
    DisconnectedSupport,
    FlatPiecePresent,
    FlatTransport,
    GridMismatch,
    IncompatibleProfile,
    InequalityViolated,
    InvalidCostParameter,
    InvalidExponent,
    LengthMismatch,
    MassMismatch,
    MonotransError,
    NonConvexSample,
    NonFiniteValue,
    NonIncreasingBreakpoints,
    NonInvertibleCost,
    NonPositiveEpsilon,
    NonPositiveJ,
    NotNonInjective,
    OutOfDomain,
    ProbeAtCriticalLevel,
    TransportMismatch,
)
from .functions import (
    Interval,
    PiecewiseAffine,
    evaluate,
    make_piecewise_affine,
    random_piecewise_affine,
    reflect,
    restrict,
    slopes,
)
from .rearrange import (
    INF,
    Measure1D,
    MultiplicityProfile,
    density_relation_residual,
    monotone_transport,
    multiplicity,
    pushforward,
)
from .regularize import (
    CheckStatus,
    GridFunction,
    inf_convolution,
    inf_convolution_bruteforce,
    monotone_envelope_check,
    ordering_check,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
