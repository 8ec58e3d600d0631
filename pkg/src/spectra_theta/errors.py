"""Exception taxonomy shared by every module.

Three failure classes are distinguished so the command line driver can map
them onto distinct exit codes: bad inputs (DomainError), iterative methods
that fail to converge or internal cross-checks that disagree (NumericError),
and requests whose memory/size cost exceeds a hard cap (ResourceError).
"""


class SpectraThetaError(Exception):
    """Base class for all library errors."""


class DomainError(SpectraThetaError, ValueError):
    """An argument violates a documented precondition."""


class NumericError(SpectraThetaError, ArithmeticError):
    """An iteration failed to converge or an internal cross-check failed."""


class ResourceError(SpectraThetaError):
    """The request exceeds a hard size cap (dense matrices would get too big)."""
