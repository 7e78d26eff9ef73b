"""Exception hierarchy shared by every module of the package."""


class KoszulError(Exception):
    """Base class for all errors raised by koszulpair."""


class DimensionMismatchError(KoszulError, ValueError):
    """Ambient dimensions or matrix shapes do not agree."""


class FieldMismatchError(KoszulError, ValueError):
    """Operands live over different fields."""


class ConsistencyError(KoszulError):
    """An identity that must hold by construction failed (internal bug)."""


class PreKoszulError(KoszulError):
    """The pair violates m11 (theta x theta) Delta11 = 0."""


class ComplexError(KoszulError):
    """A sequence of matrices is not a complex (d o d != 0)."""


class TwistingError(KoszulError):
    """A twisting or entwining map fails its axioms or cannot be built."""


class DescentError(TwistingError):
    """A generator-level twist does not preserve the relation spaces."""


class InputError(KoszulError):
    """Malformed presentation file or command-line arguments."""

    def __init__(self, message, line=None, column=None, path=None):
        super().__init__(message)
        self.line = line
        self.column = column
        self.path = path

    def __str__(self):
        msg = super().__str__()
        where = []
        if self.line is not None:
            where.append(f"line {self.line}, column {self.column}")
        if self.path:
            where.append(f"at {self.path}")
        return f"{msg} ({'; '.join(where)})" if where else msg
