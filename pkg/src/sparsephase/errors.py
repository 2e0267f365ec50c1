"""Exception hierarchy.

Every error raised by the library derives from :class:`SparsePhaseError`.
The recovery pipeline sets :attr:`SparsePhaseError.stage` before re-raising
so callers (and the CLI) can tell which step failed.
"""


class SparsePhaseError(Exception):
    stage = None

    def __str__(self):
        msg = super().__str__()
        if self.stage:
            return f"[{self.stage}] {msg}"
        return msg


class InvalidSignal(SparsePhaseError, ValueError):
    """Structural invariant of a signal model violated."""


class PreconditionError(SparsePhaseError, ValueError):
    """Inputs do not satisfy an operation's documented precondition."""


# numerics
class NumericalFailure(SparsePhaseError):
    pass


class DegenerateInput(SparsePhaseError, ValueError):
    pass


class RankDeficient(SparsePhaseError):
    pass


class SingularMatrix(SparsePhaseError):
    pass


# splines
class InconsistentSystem(SparsePhaseError):
    pass


# prony
class RootCountMismatch(SparsePhaseError):
    pass


class EmptyModel(SparsePhaseError):
    pass


class NotTriangular(SparsePhaseError, ValueError):
    pass


# retrieval
class RetrievalError(SparsePhaseError):
    """Base class for failures while placing knots."""


class UnmatchedDistance(RetrievalError):
    pass


class AmbiguousCase(RetrievalError):
    pass


class PoolInconsistent(RetrievalError):
    pass
