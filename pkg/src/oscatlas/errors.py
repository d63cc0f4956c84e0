"""Exception hierarchy shared across the package."""


class OscatlasError(Exception):
    """Base class for all library errors."""


class PoleError(OscatlasError, ArithmeticError):
    """Argument sits on a pole of a meromorphic function."""

    def __init__(self, message, location=None, order=None):
        super().__init__(message)
        self.location = location
        self.order = order


class DomainError(OscatlasError, ValueError):
    pass


class BadParams(OscatlasError, ValueError):
    pass


class OrderMismatch(OscatlasError, ValueError):
    pass


class NonpositiveLeadError(OscatlasError, ValueError):
    pass


class NonzeroInnerConstant(OscatlasError, ValueError):
    pass


class NotInvertible(OscatlasError, ValueError):
    pass


class InadmissibleClass(OscatlasError, ValueError):
    """Amplitude class parameters violate ``delta < p - 1``."""


class OrderError(OscatlasError, ValueError):
    pass


class NonConvergence(OscatlasError, RuntimeError):
    pass


class CrosscheckFailure(OscatlasError, RuntimeError):
    def __init__(self, message, results=None):
        super().__init__(message)
        self.results = results


class DimensionTooLarge(OscatlasError, ValueError):
    pass


class SupportTooWide(OscatlasError, ValueError):
    pass


class InadmissiblePhase(OscatlasError, ValueError):
    pass


class DomainPowerMismatch(OscatlasError, ValueError):
    pass


class BadDimension(OscatlasError, ValueError):
    pass


class SignConstraintViolation(OscatlasError, ValueError):
    pass


class ConfigParse(OscatlasError, ValueError):
    pass
