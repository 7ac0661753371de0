"""Exception taxonomy.

PreconditionError covers caller mistakes (bad points, mismatched domains,
boundary evaluations); InternalCheckError marks a violated internal
invariant and should never surface on valid inputs.  The CLI maps these to
distinct exit codes.
"""


class MapolytopeError(Exception):
    pass


class PreconditionError(MapolytopeError, ValueError):
    pass


class DimensionMismatch(PreconditionError):
    pass


class EmptyInput(PreconditionError):
    pass


class BoundaryPointError(PreconditionError):
    """Subdifferential requested on the domain boundary (may be unbounded)."""


class DomainMismatch(PreconditionError):
    pass


class ConvexityError(PreconditionError):
    """A caller-supplied evaluator failed the convexity spot-check."""


class NegativeDensityError(PreconditionError):
    """The 1D density is negative somewhere; no convex solution exists."""


class UnboundedRegionError(PreconditionError):
    pass


class InternalCheckError(MapolytopeError, AssertionError):
    pass
