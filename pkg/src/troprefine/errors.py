"""Exception hierarchy shared by all modules."""


class TropRefineError(Exception):
    """Base class for every error raised by the package."""


class ValidationError(TropRefineError, ValueError):
    """Malformed input data (CLI exit status 2)."""


class ZeroVector(ValidationError):
    pass


class NonzeroSum(ValidationError):
    def __init__(self, residual):
        self.residual = residual
        super().__init__(f"vectors do not sum to zero: residual {tuple(residual)}")


class NegativeGenus(ValidationError):
    pass


class DegenerateCollinear(ValidationError):
    pass


class InvalidQuadrilateral(ValidationError):
    pass


class MalformedType(ValidationError):
    pass


class NotTrivalent(MalformedType):
    pass


class WrongProblem(ValidationError):
    pass


class NonIntegralExponent(TropRefineError, ValueError):
    pass


class MixedSymmetry(TropRefineError, ValueError):
    pass


class DivisionByZeroSeries(TropRefineError, ZeroDivisionError):
    pass


class OrderExceeded(TropRefineError, ValueError):
    pass


class BelowTargetGenus(TropRefineError, ValueError):
    pass


class DegenerateConfiguration(TropRefineError):
    """The point configuration is not generic enough; re-seed and retry."""


class GenericityExhausted(TropRefineError):
    """No generic configuration found within the retry bound (CLI exit status 3)."""


class RouteMismatch(TropRefineError, AssertionError):
    """The per-vertex and Laurent-side series disagree."""
