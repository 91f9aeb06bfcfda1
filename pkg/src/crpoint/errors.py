"""Exception types shared across the package."""


class CRPointError(Exception):
    """Base class for all package errors."""


class NonSymmetricError(CRPointError, ValueError):
    pass


class NonHermitianError(CRPointError, ValueError):
    pass


class SingularMatrixError(CRPointError, ValueError):
    pass


class NonFiniteError(CRPointError, ValueError):
    pass


class DegenerateA(CRPointError):
    """The A matrix of a pair is (numerically) singular."""

    reason = "degenerate_A"


class NonGeneric(CRPointError):
    """A pair lies on a non-generic stratum (TypeII, boundary theta, zero B diagonal)."""

    def __init__(self, reason, message=None):
        self.reason = reason
        super().__init__(message or reason)


class DegeneratePair(CRPointError):
    """The 4x4 block determinant of a pair vanishes."""

    reason = "degenerate_pair"


class SearchFailed(CRPointError):
    def __init__(self, message, best_certificate=None):
        self.best_certificate = best_certificate
        super().__init__(message)


class DeltaZero(CRPointError):
    def __init__(self, delta, s=None, zprime=None):
        self.delta = delta
        self.s = s
        self.zprime = zprime
        super().__init__(f"grid minimum of |A(s)z' + conj(B(s)) conj(z')| is {delta:.3e}")


class PerturbationFailed(CRPointError):
    pass


class FormatError(CRPointError, ValueError):
    """Malformed JSON input."""
