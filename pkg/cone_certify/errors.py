"""Exception hierarchy for rigorous computations."""


class CertifyError(Exception):
    """Base class for every error raised by cone_certify."""


class DomainError(CertifyError, ValueError):
    """An argument lies outside the domain of an operation."""


class EmptyIntersection(CertifyError, ArithmeticError):
    """Two intervals are disjoint.

    This is a signal, not a crash: interval Newton catches it to certify
    that a box holds no root.
    """


class BoundUnavailable(CertifyError):
    """No proven truncation bound applies to the requested evaluation."""


class NumericalError(CertifyError, ArithmeticError):
    """A non-rigorous float iteration broke down."""


class CertificationFailure(CertifyError):
    """A rigorous step could not be completed."""
