"""Exception hierarchy shared by every kecss module."""


class KecssError(Exception):
    """Base class for all library errors."""


class InvalidCut(KecssError, ValueError):
    pass


class InvalidThreshold(KecssError, ValueError):
    pass


class NotBelowThreshold(KecssError, ValueError):
    pass


class Infeasible(KecssError):
    """The instance has no k-edge-connected spanning subgraph."""


# The free-cut oracle reports disconnected inputs under its own name.
InfeasibleGraph = Infeasible


class DegenerateCut(KecssError, ValueError):
    pass


class BudgetExceeded(KecssError, RuntimeError):
    pass


class DualUnavailable(KecssError):
    pass


class NotKRootConnected(KecssError):
    pass


class Degenerate(KecssError):
    pass


class RefusedScale(KecssError, ValueError):
    """An exhaustive oracle was asked to run on an instance that is too large."""


class ParseError(KecssError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)
