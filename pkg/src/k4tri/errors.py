"""Exception types shared across the package."""


class K4TriError(ValueError):
    """Base class for argument and input errors."""


class UnsupportedSizeError(K4TriError):
    """Input exceeds a size limit of the requested (exact) algorithm."""


class Graph6ParseError(K4TriError):
    pass


class NotK4FreeError(K4TriError):
    pass


class InvalidPartitionError(K4TriError):
    pass


class PackingBudgetExceeded(UnsupportedSizeError):
    """Exact packing search refused: too many triangles for the budget."""
