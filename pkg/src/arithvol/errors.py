"""Exception hierarchy for arithvol.

Every named error condition in the library raises one of these, so callers
(and the CLI exit-code mapping) can distinguish bad input, infeasible /
non-big requests, and internal tolerance failures.
"""


class ArithvolError(Exception):
    """Base class for all library errors."""


class InputError(ArithvolError):
    """Malformed input: dimension mismatch, bad parameters, unknown kinds."""


class RecessionError(InputError):
    """Sampled potential whose boundary slopes do not match the divisor."""


class UnboundedSupremumError(ArithvolError):
    """Legendre conjugate requested outside the recession-slope range."""


class InfeasibleError(ArithvolError):
    """No feasible function/decomposition exists; carries a witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class GradingViolationError(InputError):
    """A graded series whose products escape the declared supports."""

    def __init__(self, message, offending_pair=None):
        super().__init__(message)
        self.offending_pair = offending_pair


class ValuationOfZeroError(InputError):
    """Valuation of the zero function requested (the value would be infinite)."""


class EmptySeriesError(InputError):
    """A graded series with no nonzero level where one is required."""


class UnsupportedCenterError(InputError):
    """A base-condition center outside the supported kinds."""


class BignessRequiredError(ArithvolError):
    """Operation defined (here) only for big divisors."""


class OutOfRangeError(InputError):
    """Monomial violating the divisor-positivity constraint."""


class ConsistencyError(ArithvolError):
    """Internal cross-check failed (e.g. decomposition does not sum up)."""


class ToleranceError(ArithvolError):
    """A numeric result failed its accuracy contract."""
