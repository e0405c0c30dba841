"""Exception hierarchy.

``SolverError`` subclasses signal numerical failure (CLI exit status 3);
plain ``ValueError`` subclasses signal bad input.
"""


class NonFiniteInput(ValueError):
    """A field with a non-finite or non-positive entry was passed in."""


class UnsupportedCase(ValueError):
    """The requested (graph, k) combination has no implementation."""


class SolverError(RuntimeError):
    pass


class BracketFailure(SolverError):
    pass


class ConvergenceFailure(SolverError):
    pass


class ConvexityViolation(SolverError):
    def __init__(self, points):
        self.points = list(points)
        super().__init__(f"second differences not positive at {len(self.points)} grid points: {self.points[:10]}")


class TooLarge(SolverError):
    pass


class EmptySupport(SolverError):
    pass
