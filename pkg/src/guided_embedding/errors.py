"""Exception types raised across the package."""


class GraphError(ValueError):
    """Base class for graph construction/validation failures."""


class UnknownNode(GraphError):
    pass


class NegativeWeight(GraphError):
    pass


class SelfLoop(GraphError):
    pass


class IsolatedNode(GraphError):
    pass


class NotSymmetric(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class NotPSD(ValueError):
    pass


class SpectralRadiusExceeded(ValueError):
    pass


class EigenvalueOutOfRange(ValueError):
    pass


class NonBinarySelection(ValueError):
    pass


class IndexOutOfRange(ValueError):
    pass


class EmptyFocus(ValueError):
    pass


class DegenerateTarget(ValueError):
    pass


class TooManyClusters(ValueError):
    pass


class EmptyGraph(ValueError):
    pass


#: errors that indicate bad input/configuration (CLI exit code 2)
VALIDATION_ERRORS = (
    GraphError,
    DimensionMismatch,
    NonBinarySelection,
    IndexOutOfRange,
    EmptyFocus,
    TooManyClusters,
    EmptyGraph,
    FileNotFoundError,
)

#: errors that indicate a numerical failure (CLI exit code 3)
NUMERICAL_ERRORS = (
    NotSymmetric,
    NotPSD,
    SpectralRadiusExceeded,
    EigenvalueOutOfRange,
    DegenerateTarget,
)
