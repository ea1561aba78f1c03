"""Exception hierarchy.

Everything raised on purpose by the library derives from :class:`TempusError`.
:class:`HypothesisViolation` marks inputs that break a standing assumption of a
stability result (non-regressive coefficients, complex or repeated roots,
Riccati breakdown); the CLI maps those to exit code 3.
"""


class TempusError(Exception):
    pass


class TimeScaleError(TempusError, ValueError):
    pass


class NonMonotoneError(TimeScaleError):
    pass


class NonFiniteError(TimeScaleError):
    pass


class TooFewPointsError(TimeScaleError):
    pass


class NonFiniteValuesError(TempusError, ValueError):
    """A grid function would hold NaN or an infinity (often an overflowed exponential)."""


class GridMismatchError(TempusError, ValueError):
    """Grid functions that do not live on the same time scale were combined."""


class HypothesisViolation(TempusError):
    pass


class NonRegressiveError(HypothesisViolation):
    def __init__(self, index, what="coefficient"):
        self.index = index
        super().__init__(f"{what} is not regressive at index {index} (1 + mu*p == 0)")


class ComplexRootsError(HypothesisViolation):
    def __init__(self, alpha, beta):
        self.alpha, self.beta = alpha, beta
        super().__init__(
            f"complex characteristic roots for alpha={alpha!r}, beta={beta!r}")


class RepeatedRootsError(HypothesisViolation):
    def __init__(self, root):
        self.root = root
        super().__init__(f"characteristic roots are not distinct (double root near {root!r})")


class RiccatiBreakdownError(HypothesisViolation):
    def __init__(self, index):
        self.index = index
        super().__init__(f"Riccati breakdown at index {index}: 1 - mu*z == 0")


class RiccatiConditionError(HypothesisViolation):
    def __init__(self, message, index=None):
        self.index = index
        super().__init__(message if index is None else f"{message} at index {index}")


class ConfigError(TempusError, ValueError):
    def __init__(self, key, message):
        self.key = key
        super().__init__(f"{key}: {message}")


class CampaignError(TempusError):
    def __init__(self, seed, cause):
        self.seed = seed
        self.cause = cause
        super().__init__(f"trial with seed {seed} failed: {cause}")
