"""Exception types shared across the package."""


class HicError(Exception):
    """Base class for all errors raised by this package."""


class GraphFormatError(HicError):
    """A graph file (or raw edge description) could not be parsed."""


class UnknownNodeError(HicError):
    """A node id is outside the valid range of the graph."""


class DisconnectedGraphError(HicError):
    """An operation that requires a connected graph got a disconnected one."""


class NotATreeError(HicError):
    """An operation that requires a tree got a graph with cycles or gaps."""


class EmptySourceSetError(HicError):
    """Effective resistance needs at least one grounded source node."""


class EmptyStubbornSetError(HicError):
    """Solvers need at least one zero-anchored node."""


class DimensionMismatchError(HicError):
    """A per-node vector does not match the graph's node count."""


class SingularSystemError(HicError):
    """The reduced linear system was singular; valid inputs never produce this."""


class MissingInboundError(HicError):
    """A message update was attempted before all required inputs arrived."""


class TooFewStubbornError(HicError):
    """Candidate pruning needs at least two zero-anchored nodes."""


class InvalidSpecError(HicError):
    """A random-graph generator specification has out-of-range parameters."""


class NoConvergenceError(HicError):
    """An iterative routine hit its iteration cap before converging."""
