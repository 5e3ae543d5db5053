"""Exception types raised across the package.

Everything derives from :class:`HitsetError` so callers (the CLI in
particular) can separate bad input from genuine bugs.
"""


class HitsetError(Exception):
    """Base class for all package errors."""


class ValidationError(HitsetError, ValueError):
    """Input data does not describe a valid object."""


class NonFiniteEntry(ValidationError):
    def __init__(self, x, y):
        super().__init__(f"transition matrix entry ({x}, {y}) is not finite")
        self.x, self.y = x, y


class NegativeEntry(ValidationError):
    def __init__(self, x, y, value=None):
        super().__init__(f"transition matrix entry ({x}, {y}) is negative: {value}")
        self.x, self.y, self.value = x, y, value


class RowSumError(ValidationError):
    def __init__(self, x, total):
        super().__init__(f"row {x} sums to {total!r}, not 1")
        self.x, self.total = x, total


class NotIrreducible(ValidationError):
    pass


class EmptyTarget(ValidationError):
    def __init__(self, what="target"):
        super().__init__(f"{what} set must be nonempty")


class LengthMismatch(ValidationError):
    pass


class StateCountCap(HitsetError):
    def __init__(self, n, cap):
        super().__init__(f"{n} states exceeds the subset-enumeration cap of {cap}")
        self.n, self.cap = n, cap


class ParameterOutOfRange(ValidationError):
    pass


class SpecViolation(ValidationError):
    pass


class EntryOutOfRange(ValidationError):
    """A constructed transition probability fell outside [0, 1]; increase N."""

    def __init__(self, position, value):
        super().__init__(f"entry {position} = {value!r} is outside [0, 1]; increase N")
        self.position, self.value = position, value


class WindowViolation(ValidationError):
    pass


class NotDecreasing(ValidationError):
    pass


class NormalizationError(ValidationError):
    pass


class SetsOverlap(ValidationError):
    pass


class ConvergenceFailure(HitsetError):
    pass


class StepCapExceeded(HitsetError):
    def __init__(self, trajectory, step_cap):
        super().__init__(
            f"step budget of {step_cap} exhausted with trajectory {trajectory} unfinished"
        )
        self.trajectory, self.step_cap = trajectory, step_cap
