"""Exception hierarchy shared by every module of the package."""


class FIError(Exception):
    """Base class for all library errors."""


class ParseError(FIError):
    pass


class CycleError(FIError):
    """Declared covers close up into a cycle (antisymmetry fails)."""

    def __init__(self, x, y):
        super().__init__(f"{x!r} <= {y!r} and {y!r} <= {x!r} with {x!r} != {y!r}")
        self.pair = (x, y)


class UnknownLabel(FIError):
    pass


class DecompositionError(FIError):
    pass


class Disconnected(FIError):
    pass


# field
class NotInK0(FIError):
    pass


class ZeroElement(FIError):
    pass


class NotANorm(FIError):
    pass


class NotUnitary(FIError):
    pass


# algebra
class MismatchedCarrier(FIError):
    pass


class NotInvertible(FIError):
    def __init__(self, witness):
        super().__init__(f"zero diagonal entry at {witness!r}")
        self.witness = witness


class InvalidCocycle(FIError):
    def __init__(self, message, triple=None):
        super().__init__(message)
        self.triple = triple


# involution
class InvalidInvolution(FIError):
    pass


class NotTwistable(FIError):
    pass


class DomainMismatch(FIError):
    pass


class MalformedIdempotent(FIError):
    pass


class NotScalarStable(FIError):
    pass


class DecompositionFailure(FIError):
    pass


class H1Obstruction(FIError):
    """A multiplicative automorphism that is not inner was encountered."""

    def __init__(self, message, cocycle=None):
        super().__init__(message)
        self.cocycle = cocycle


class NotScalar(FIError):
    pass


class NotSymmetric(FIError):
    pass


class NotInK1OnX3(FIError):
    def __init__(self, witness, value):
        super().__init__(f"diagonal value {value} at {witness!r} is not a norm")
        self.witness = witness
        self.value = value


# classify / oracle
class KindMismatch(FIError):
    pass


class BudgetExceeded(FIError):
    pass
