"""Exception types shared across the game engine and the witness machinery."""

from __future__ import annotations


class FragGameError(Exception):
    """Base class for all domain errors raised by this package."""


class FacePointError(FragGameError):
    """No shrinking sphere slice exists at this point (flat face of the unit ball)."""


class HintStarvationError(FragGameError):
    """A declared-supremum hint left the strategy with no legal point to pick.

    This is an artifact of emulating unattained suprema with finite clouds,
    not a loss condition of the game itself.
    """


class CoverExhaustionError(FragGameError):
    """The witness margin alpha is too small for any cover index k <= k_max."""


class InvalidMoveError(FragGameError):
    """A player produced an illegal move (empty set or not nested in its parent)."""
