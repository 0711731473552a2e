"""Exception hierarchy shared by all bohrlab modules."""


class BohrLabError(Exception):
    """Base class for every error raised by bohrlab."""


class InvalidRadius(BohrLabError, ValueError):
    pass


class NonSchwarzInner(BohrLabError, ValueError):
    """Raised when composing with an inner series whose constant term is nonzero."""


class EvaluationFailure(BohrLabError, ArithmeticError):
    """An evaluator returned non-finite values on a sample circle."""


class DomainError(BohrLabError, ValueError):
    pass


class PoleProximity(BohrLabError, ArithmeticError):
    pass


class ZeroDerivative(BohrLabError, ArithmeticError):
    pass


class DegenerateOmittedPoints(BohrLabError, ValueError):
    pass


class ZeroDetected(BohrLabError, ArithmeticError):
    """h vanished away from the origin; the corpus entry is inconsistent."""


class UnknownSuite(BohrLabError, KeyError):
    pass


class MissingData(BohrLabError, LookupError):
    pass


class IoFailure(BohrLabError, OSError):
    pass
