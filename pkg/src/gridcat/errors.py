"""Exception types shared across the package."""


class GridcatError(Exception):
    """Base class for all gridcat errors."""


class SchemaError(GridcatError):
    """A table document violates the file schema. Carries the offending field name."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class PreconditionError(GridcatError):
    """An operation's precondition does not hold. Names the failed premise."""


class SingularMatrixError(GridcatError):
    """A linear solve hit a rank-deficient matrix."""

    def __init__(self, rank: int, size: int):
        self.rank = rank
        self.size = size
        super().__init__(f"singular matrix: rank {rank} < {size}")


class FieldSearchError(GridcatError):
    """Prime search exceeded the internal cap."""


class PointsNotFoundError(GridcatError):
    """No admissible evaluation points found within the search policy."""


class InvalidTableError(GridcatError):
    """A simulation was requested for a table that fails validation."""

    def __init__(self, report):
        self.report = report
        super().__init__("table fails validation; refusing to simulate")
