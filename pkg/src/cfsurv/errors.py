"""Exception types raised by the cfsurv library."""


class CfsurvError(Exception):
    """Base class for all cfsurv errors."""


class PlacementExhausted(CfsurvError):
    """Rejection sampling for node placement exceeded its retry budget.

    Signals an over-constrained geometry (too many nodes / spacing too
    large for the requested area).
    """


class CovarianceNotFactorable(CfsurvError):
    """Shadowing covariance lost more than the allowed eigenvalue mass
    during the clipped symmetric factorization."""


class GammaZero(CfsurvError):
    """A jamming node has a zero estimate-quality coefficient, so the
    equal-power rule cannot split power across links."""


class NumericalBreakdown(CfsurvError):
    """The feasibility solver exceeded its pivot budget."""


class BracketFailure(CfsurvError):
    """The bisection bracket could not be initialized: the guaranteed
    lower anchor is itself infeasible."""
