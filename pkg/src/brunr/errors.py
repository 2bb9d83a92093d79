"""Exception types shared across the package."""


class BrunrError(Exception):
    """Base class for all errors raised by brunr."""


class ContainmentViolation(BrunrError):
    """A denominator generator does not lie in the numerator span."""


class BudgetExceeded(BrunrError):
    """A brute-force computation would exceed its configured budget."""

    def __init__(self, what, size, limit, hint=""):
        self.what = what
        self.size = size
        self.limit = limit
        self.hint = hint
        msg = f"{what}: size {size} exceeds budget {limit}"
        if hint:
            msg += f" ({hint})"
        super().__init__(msg)


class NotAGroup(BrunrError):
    """A multiplication table fails a group axiom."""

    def __init__(self, axiom, witness):
        self.axiom = axiom
        self.witness = tuple(witness)
        super().__init__(f"{axiom} fails at {self.witness}")


class OrderBoundExceeded(BrunrError):
    pass


class InvalidPermutation(BrunrError):
    pass


class NotASubgroup(BrunrError):
    pass


class DimensionMismatch(BrunrError):
    pass


class UnsupportedDimension(BrunrError):
    pass


class WitnessNotFound(BrunrError):
    pass


class InvalidLattice(BrunrError):
    pass
