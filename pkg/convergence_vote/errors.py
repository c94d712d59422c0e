"""Exception hierarchy for convergence voting."""

from typing import List, Optional


class ConvergenceVoteError(Exception):
    """Base class for all package errors."""


class InputError(ConvergenceVoteError, ValueError):
    """The caller supplied an invalid profile, graph or parameter."""


class BallotSyntaxError(InputError):
    """A ballot file does not follow the grammar."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CycleError(BallotSyntaxError):
    """A ballot's preference pairs contain a cycle after closure."""

    def __init__(self, cycle: List[str], line: Optional[int] = None):
        self.cycle = list(cycle)
        super().__init__(f"preference cycle {' > '.join(self.cycle)}", line)


class CountOverflowError(InputError):
    """A voter count does not fit in an unsigned 64-bit integer."""


class NormalizerError(InputError):
    """A normalizer override is smaller than some row's out-weight."""


class BallotShapeError(InputError):
    """A rule needs chain ballots and got a general partial order."""


class ChainError(ConvergenceVoteError):
    """Markov chain analysis failed."""


class EmptyElectorateError(ChainError):
    """The complemented graph has normalizer 0 (no voters or one candidate)."""


class NotIrreducibleError(ChainError):
    """A matrix expected to be irreducible has several communication classes."""


class ConvergenceError(ChainError):
    """Power iteration did not reach the tolerance within the step budget."""
