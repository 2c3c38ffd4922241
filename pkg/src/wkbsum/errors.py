"""Exception types shared across the package."""


class WKBError(Exception):
    pass


class DomainError(WKBError, ValueError):
    pass


class ConvergenceDomainError(DomainError):
    """Raised when 4U <= 1, outside the radius of the 1/U series."""


class StructureViolation(WKBError):
    """A phase derivative does not have the expected canonical shape."""


class BranchDiscontinuity(WKBError):
    pass


class NonRealResult(WKBError):
    pass


class QuadratureNonConvergence(WKBError):
    pass


class BracketFailure(WKBError):
    pass


class NodeCountMismatch(WKBError):
    pass


class NumericalOverflow(WKBError):
    pass
