"""Exception types shared across the package."""

from __future__ import annotations


class NoetError(Exception):
    """Base class for every error this package raises deliberately."""


class MalformedInput(NoetError):
    """Bad user-supplied structure: files, expressions, parameters."""


class LimitExceeded(NoetError):
    """A configured resource bound (space size, fuel) was hit."""


# -- spaces ------------------------------------------------------------

class ValueOutsideSpace(NoetError):
    def __init__(self, value, space):
        self.value = value
        self.space = space
        super().__init__(f"value {value!r} is not a member of {space.describe()}")


class SpaceTooLarge(LimitExceeded):
    def __init__(self, estimate, cap):
        self.estimate = estimate
        self.cap = cap
        super().__init__(f"space needs {estimate} elements, cap is {cap}")


class SpaceMismatch(NoetError):
    pass


# -- relations ---------------------------------------------------------

class RequiresExtensional(NoetError):
    pass


class NotNoetherian(NoetError):
    def __init__(self, witness=None):
        self.witness = witness
        super().__init__("relation admits an infinite descending chain"
                         + (f": {witness}" if witness is not None else ""))


# -- catalog -----------------------------------------------------------

class MalformedExpr(MalformedInput):
    pass


class UnknownNamedFunction(MalformedInput):
    def __init__(self, name):
        self.name = name
        super().__init__(f"no induced function named {name!r}")


# -- loops -------------------------------------------------------------

class EmptySpace(NoetError):
    pass


class InitEscapesSpace(NoetError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"initialization produces a state outside the space: {witness!r}")


class BodyNotSubsetOfOrder(NoetError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"body pair not contained in the order: {witness!r}")


class DomainMismatch(NoetError):
    def __init__(self, witness, side):
        self.witness = witness
        self.side = side
        super().__init__(f"body and order domains differ at {witness!r} ({side})")


class OrderNotNoetherian(NoetError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"order is not Noetherian: {witness}")


class FuelExhausted(LimitExceeded):
    def __init__(self, fuel, partial=None):
        self.fuel = fuel
        self.partial = partial
        super().__init__(f"fuel {fuel} exhausted before a terminal state was reached")


class InputOutsideSpace(NoetError):
    def __init__(self, value):
        self.value = value
        super().__init__(f"input {value!r} is not served by the loop's initialization")


# -- examples ----------------------------------------------------------

class ParameterOutOfRange(MalformedInput):
    pass


class NonTotalFunction(NoetError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"variant function undefined at {witness!r}")


class NegativeVariantValue(NoetError):
    def __init__(self, witness, value):
        self.witness = witness
        self.value = value
        super().__init__(f"variant value {value} at {witness!r} is negative")


class UnknownOracle(MalformedInput):
    def __init__(self, name):
        self.name = name
        super().__init__(f"no postcondition oracle named {name!r}")
