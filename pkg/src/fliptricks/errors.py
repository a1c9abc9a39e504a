"""Common exception base for the package."""


class FlipTrickError(Exception):
    """Base class for all domain errors raised by fliptricks."""
