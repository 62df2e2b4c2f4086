"""Exception hierarchy shared by every pncalc module."""

from __future__ import annotations


class PncalcError(Exception):
    """Base class for all engine errors."""


class PolySyntaxError(PncalcError, ValueError):
    """Polynomial text does not conform to the grammar."""

    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


class UnknownVariable(PncalcError, KeyError):
    def __init__(self, name: str, position: int | None = None):
        self.name = name
        self.position = position
        where = "" if position is None else f" at position {position}"
        super().__init__(f"unknown variable {name!r}{where}")

    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return self.args[0]


class ChartMismatch(PncalcError, ValueError):
    """Operands live on different charts."""


class DimensionMismatch(PncalcError, ValueError):
    pass


class NotCompatible(PncalcError, ValueError):
    """N.P is not antisymmetric, so N.P does not define a bivector."""


class NotAntisymmetric(PncalcError, ValueError):
    pass


class JacobiFailure(PncalcError, ValueError):
    pass


class NonConstantDeterminant(PncalcError, ValueError):
    pass


class AlgebraMismatch(PncalcError, ValueError):
    pass


class ModelMismatch(PncalcError, ValueError):
    pass


class GroupAxiomError(PncalcError, ValueError):
    """A candidate group law violates one of the group identities."""

    def __init__(self, identity: str, witness: str):
        self.identity = identity
        self.witness = witness
        super().__init__(f"{identity} fails; witness term {witness}")


# --- model-file input errors (CLI exit code 2) ---------------------------------


class InputError(PncalcError):
    """Model file cannot be turned into a well-formed model."""


class SchemaError(InputError, ValueError):
    def __init__(self, pointer: str, message: str):
        self.pointer = pointer
        super().__init__(f"schema violation at {pointer or '/'}: {message}")


class ParseError(InputError, ValueError):
    def __init__(self, field: str, message: str, position: int | None = None):
        self.field = field
        self.position = position
        super().__init__(f"{field}: {message}")


class InvariantError(InputError, ValueError):
    pass
