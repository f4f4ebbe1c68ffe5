"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Array shapes do not match the grid or each other."""


class DivergenceError(RuntimeError):
    """A non-finite value appeared during iteration."""

    def __init__(self, iteration: int):
        self.iteration = iteration
        super().__init__(f"non-finite field value at iteration {iteration}")


class CapacityError(RuntimeError):
    """Problem exceeds the dense oracle's unknown-count cap."""


class SingularSystemError(RuntimeError):
    """Dense system was singular; indicates an assembly bug."""


class UndefinedOrderError(ValueError):
    """Observed order is undefined (fine-grid error hit the floating-point floor)."""


class StudyAbortError(RuntimeError):
    """A convergence-study level failed to converge."""

    def __init__(self, nx: int, message: str):
        self.nx = nx
        super().__init__(message)


class ConfigError(ValueError):
    """Bad key, value, or invariant in a run configuration."""


class FieldParseError(ValueError):
    """Malformed field CSV file."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
