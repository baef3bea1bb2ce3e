"""
Exception hierarchy.

Input errors subclass ValueError, numeric failures subclass ArithmeticError, so callers
that only know the builtin types keep working.
"""


class InfoboundError(Exception):
    """Base class for every error raised by infobound."""


class InputError(InfoboundError, ValueError):
    """The caller supplied arguments outside the operation's preconditions."""


class NumericError(InfoboundError, ArithmeticError):
    """A numerical procedure failed to reach its tolerance."""


class DomainError(InputError): ...


class AbsolutelyContinuityViolation(InputError):
    """Q charges an atom that P does not; R(Q||P) = +inf."""


class PreconditionViolation(InputError): ...


class LengthMismatch(InputError): ...


class EmptySample(InputError): ...


class TooFewPoints(InputError): ...


class DegenerateQoI(InputError):
    """The QoI is almost surely constant under P."""


class DegenerateData(InputError): ...


class TooLarge(InputError): ...


class ParameterError(InputError): ...


class MalformedInput(InputError):
    """A file is not valid UTF-8 text or not valid JSON."""


class Unsupported(InputError): ...


class NonconvergenceError(NumericError): ...


class QuadratureNonconvergence(NumericError): ...


class OverflowGuard(NumericError): ...
