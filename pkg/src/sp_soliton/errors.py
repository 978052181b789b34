"""Exception and warning types."""
from __future__ import annotations


class SolitonError(Exception):
    """Base class for solver failures."""


class GridError(SolitonError, ValueError):
    """Invalid grid parameters or mismatched grids."""


class NoBoundStateError(SolitonError):
    """The requested eigenvalue does not lie below the continuum."""


class NoSolitaryWaveError(NoBoundStateError):
    """The effective potential admits no negative eigenvalue."""


class BracketError(SolitonError):
    """The shooting bracket does not contain the requested eigenvalue."""


class ConvergenceError(SolitonError):
    """Self-consistent iteration hit its iteration cap.

    The last iterate is attached as ``state``.
    """

    def __init__(self, message: str, state=None):
        super().__init__(message)
        self.state = state


class DegenerateStateWarning(UserWarning):
    """A diagnostic was evaluated on a (numerically) zero field."""


class ResolutionWarning(UserWarning):
    """The grid is too short or too coarse for the requested state."""
