"""Exception hierarchy shared by every module of the package."""


class KnotvolError(Exception):
    """Base class for all errors raised by knotvol."""


# notation
class MalformedSyntax(KnotvolError, ValueError):
    pass


class InvalidDiagram(KnotvolError, ValueError):
    pass


class GeneratorOutOfRange(KnotvolError, ValueError):
    pass


class NotAKnot(KnotvolError, ValueError):
    pass


class DuplicateName(KnotvolError, ValueError):
    pass


class NonPositiveVolume(KnotvolError, ValueError):
    pass


# polyring
class ZeroBase(KnotvolError, ZeroDivisionError):
    """Evaluation at 0 of a polynomial with negative exponents."""


class NotDivisible(KnotvolError, ArithmeticError):
    pass


class NotSquare(KnotvolError, ValueError):
    pass


class ZeroPolynomial(KnotvolError, ValueError):
    pass


class RootFindingError(KnotvolError, ArithmeticError):
    """Root iteration did not produce certified roots."""


# alexander / jones
class DegenerateDiagram(KnotvolError, ValueError):
    pass


class TooManyCrossings(KnotvolError, ValueError):
    pass


# twisted
class ArcMismatch(KnotvolError, ValueError):
    pass


class NotSL2(KnotvolError, ValueError):
    pass


class NotARepresentation(KnotvolError, ValueError):
    pass


class Reducible(KnotvolError, ValueError):
    pass


class DivisionFailure(KnotvolError, ArithmeticError):
    pass


class DegenerateColumn(KnotvolError, ArithmeticError):
    pass


# stats / pipeline
class EmptyInput(KnotvolError, ValueError):
    pass


class DegenerateSample(KnotvolError, ValueError):
    pass


class MissingValue(KnotvolError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class EmptyPopulation(KnotvolError, ValueError):
    pass


class UnknownKnot(KnotvolError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class ConfigError(KnotvolError, ValueError):
    pass
