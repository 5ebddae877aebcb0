"""Shared exception base."""


class BeepReaderError(Exception):
    """Base class for every error raised by this package."""
