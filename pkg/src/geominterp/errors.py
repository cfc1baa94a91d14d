"""Exception hierarchy shared by all geominterp modules."""


class GeomInterpError(Exception):
    """Base class for every error raised by this package."""


class RepeatedNodes(GeomInterpError):
    """Two parameter nodes coincide where distinct nodes are required."""


class EpsilonTooLarge(GeomInterpError):
    """Preconditioning parameter leaves a non-positive difference or determinant."""


class NotQuadratic(GeomInterpError):
    """Closed-form solve requested for data that is not a 4-point (n=2) problem."""


class InadmissibleDeterminants(GeomInterpError):
    """The three n=2 difference determinants do not share a strict sign."""


class SingularJacobian(GeomInterpError):
    """Newton linear system stayed singular through regularization and restarts."""


class NoSignChange(GeomInterpError):
    """Bisection bracket does not straddle a root."""


class OutOfInterval(GeomInterpError):
    """Requested curve parameter lies outside the curve's domain or is unordered."""


class SolveFailed(GeomInterpError):
    """A solve inside a multi-scale experiment failed; partial results attached.

    Attributes:
        partial: OrderEstimate built from the scales completed before the failure.
        scale_index: index of the scale whose solve failed.
    """

    def __init__(self, message, partial=None, scale_index=None):
        super().__init__(message)
        self.partial = partial
        self.scale_index = scale_index


class ParseError(GeomInterpError):
    """Malformed point-file content.

    Attributes:
        line: 1-based number of the offending line.
    """

    def __init__(self, message, line):
        super().__init__(f"line {line}: {message}")
        self.line = line


class OddCount(GeomInterpError):
    """Point file holds an odd number of points."""


class TooFew(GeomInterpError):
    """Point file holds fewer than four points."""
