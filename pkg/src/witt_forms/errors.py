"""Exception hierarchy shared by every module of the package."""


class WittFormsError(Exception):
    """Base class for all library errors."""


class DivisionByZero(WittFormsError, ZeroDivisionError):
    pass


class ZeroElement(WittFormsError, ValueError):
    """An operation that needs a nonzero element received zero."""


class FieldMismatch(WittFormsError, ValueError):
    pass


class SingularForm(WittFormsError, ValueError):
    pass


class NonInvertible(WittFormsError, ArithmeticError):
    pass


class UnsupportedAlgebraShape(WittFormsError, ValueError):
    pass


class NoReferenceTuple(WittFormsError, RuntimeError):
    pass


class InvalidReferenceTuple(WittFormsError, ValueError):
    pass


class UndecidableSample(WittFormsError, RuntimeError):
    pass


class NotAMorphism(WittFormsError, ValueError):
    pass


class TrivialMorphism(WittFormsError):
    """The module half of a pair vanishes on every sample.

    Carries the recovered ordering and whether it is a nil-ordering, which is
    the classification of a trivial pair.
    """

    def __init__(self, message, ordering=None, is_nil=None):
        super().__init__(message)
        self.ordering = ordering
        self.is_nil = is_nil


class ParseError(WittFormsError, ValueError):
    pass
