"""Exception hierarchy shared by every module."""


class DgsError(Exception):
    """Base class for all library errors."""


class MalformedGraph6(DgsError, ValueError):
    pass


class SizeLimitExceeded(DgsError, ValueError):
    pass


class SizeMismatch(DgsError, ValueError):
    pass


class MatrixFormatError(DgsError, ValueError):
    pass


class NonSquare(DgsError, ValueError):
    pass


class Singular(DgsError, ArithmeticError):
    pass


class NotPrime(DgsError, ValueError):
    pass


class NotOddPrime(NotPrime):
    pass


class NotSupported(DgsError):
    pass


class NonIntegralColumn(DgsError, ArithmeticError):
    pass


class FactorizationIncomplete(DgsError):
    pass


class SingularWalkMatrix(DgsError, ArithmeticError):
    pass


class NotCospectral(DgsError):
    pass


class VerificationFailed(DgsError, AssertionError):
    pass


class RankHypothesisFailed(DgsError):
    pass


class CensusAuditError(DgsError, AssertionError):
    """A certified graph turned out to have a generalized-cospectral mate."""
