from typing import Optional


class FqCoverError(ValueError):
    exit_code: int = 1

    def __str__(self) -> str:
        if len(self.args) != 0 and isinstance(self.args[0], dict):
            return self.args[0].get("message", super().__str__())
        return super().__str__()


class BadSpec(FqCoverError):
    exit_code = 3


class NotPrime(BadSpec):
    pass


class DegreeOutOfRange(BadSpec):
    pass


class FieldTooLarge(BadSpec):
    pass


class ReducibleModulus(BadSpec):
    pass


class BadEpsilon(BadSpec):
    pass


class BadArity(BadSpec):
    pass


class ArityMismatch(BadSpec):
    pass


class DimensionMismatch(BadSpec):
    pass


class ZeroDirection(BadSpec):
    pass


class OriginInSet(BadSpec):
    pass


class NoProperSubfield(BadSpec):
    pass


class DivisionByZero(FqCoverError, ZeroDivisionError):
    pass


class BudgetExceeded(FqCoverError):
    exit_code = 4

    def __init__(self, count: int, budget: int):
        super().__init__(
            f"Exhaustive enumeration needs {count} subsets, budget is {budget}"
        )
        self.count = count
        self.budget = budget


class TheoremViolation(FqCoverError):
    """A checked inequality or identity failed: a theorem counterexample."""

    exit_code = 2


class SpectralMismatch(TheoremViolation):
    pass


class BoundViolated(TheoremViolation):
    def __init__(self, message: str, t: Optional[int] = None):
        super().__init__(message)
        self.t = t


class IdentityViolated(TheoremViolation):
    pass


class FqCoverWarning(UserWarning):
    pass
