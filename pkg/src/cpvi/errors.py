"""Exception types shared across the package."""


class CpviError(Exception):
    """Base class for all package errors."""


class DenominatorVanishes(CpviError):
    """A substitution or construction produced an identically zero denominator."""


class PoleAtPoint(CpviError):
    """Exact evaluation hit a zero of the denominator."""


class ZeroPolynomial(CpviError):
    """Operation undefined on the zero polynomial (e.g. total degree)."""


class ExpressionTooLarge(CpviError):
    """A polynomial exceeded the active term-count ceiling."""


class ParseError(CpviError):
    """Malformed textual polynomial / rational function input."""


class NonPolynomial(CpviError):
    """A transformed Hamiltonian failed the polynomiality (holomorphy) check.

    Carries the offending monomials in ``args[1]`` when available.
    """


class BadParameterRelation(CpviError):
    """Numeric parameters violate the defining affine relation."""


class StepLimitExceeded(CpviError):
    """The adaptive integrator ran out of steps (likely a movable singularity)."""

    def __init__(self, message: str, last_t: float | None = None):
        super().__init__(message)
        self.last_t = last_t


class BlowUp(CpviError):
    """A trajectory component exceeded the magnitude cap."""

    def __init__(self, message: str, last_t: float | None = None):
        super().__init__(message)
        self.last_t = last_t


class AnsatzTooLarge(CpviError):
    """The first-integral ansatz would have too many unknowns."""
