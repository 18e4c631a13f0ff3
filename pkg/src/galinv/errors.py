"""Exception hierarchy shared by every galinv module.

The CLI maps each class to a fixed process exit code, see ``galinv.cli``.
"""


class GalinvError(Exception):
    """Base class for all library errors."""


class NotOrthogonal(GalinvError):
    pass


class NotSpecial(GalinvError):
    pass


class SingularMatrix(GalinvError):
    pass


class DomainError(GalinvError):
    pass


class IndexOutOfRange(GalinvError):
    pass


class RegularityError(GalinvError):
    pass


class DegenerateJet(GalinvError):
    """A jet is too degenerate for the moving frame to exist.

    ``quantity`` names what vanished (``"X''"``, ``"X''xX'''"``, ...) and
    ``index`` is the sample node when known.
    """

    def __init__(self, quantity: str, value: float, index: int | None = None):
        self.quantity = quantity
        self.value = value
        self.index = index
        where = "" if index is None else f" at node {index}"
        super().__init__(f"degenerate jet{where}: |{quantity}| = {value:.3e}")


class NoOverlap(GalinvError):
    pass


class NotInGroup(GalinvError):
    """A recovered 5x5 quotient is not (close to) a special Galilean element."""

    def __init__(self, message: str, defect: float):
        self.defect = defect
        super().__init__(message)


class InvalidInvariants(GalinvError):
    pass


class StepTooLarge(GalinvError):
    pass


class NonPositiveMass(GalinvError):
    pass
