"""Exception hierarchy shared by every module of the package."""


class CalculusError(Exception):
    """Base class for all errors raised by the package."""


class MixedRing(CalculusError):
    """Operands belong to different coefficient ring instances."""


class NoDerivations(CalculusError):
    """The coefficient algebra has no partial derivatives."""


class NotInvertible(CalculusError):
    """Division by an element without an inverse."""


class NotPositive(CalculusError):
    """A square root of a non-positive jet was requested."""


class TruncationExhausted(CalculusError):
    """Repeated differentiation ran past the jet order."""


class ChartMismatch(CalculusError):
    """Forms over different charts were combined."""


class DegreeError(CalculusError):
    """A form of the wrong degree was supplied."""


class Inhomogeneous(CalculusError):
    """A homogeneous element was required."""


class SqrtUnavailable(CalculusError):
    """The determinant has no exact square root in the coefficient ring."""


class NotRegular(CalculusError):
    """The codifferential is not regular."""


class LeibnizatorMismatch(CalculusError):
    """An operator does not have the second order Leibniz form needed for tensor extension."""


class InvalidMetric(CalculusError):
    """The metric matrix is not symmetric and invertible."""


class Overflow(CalculusError):
    """A product or derivative exceeded the configured degree cap."""


class NotCleft(CalculusError):
    """A bracket cannot be reconstructed consistently from the Laplacian."""


class PerpIdentityFails(CalculusError):
    """The supplied perp operation violates the four term identity."""


class DeltaNotCompatible(CalculusError):
    """The codifferential is not compatible with the perp operation."""


class NotBimodule(CalculusError):
    """A gauge map is not a bimodule map."""


class NotConformal(CalculusError):
    """Conformal data failed its defining identities."""


class NotDerivation(CalculusError):
    """A map offered as a derivation is not one."""


class ParseError(CalculusError):
    """Malformed geometry description or expression."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
