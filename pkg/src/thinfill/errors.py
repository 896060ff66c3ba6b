"""Domain errors shared across the package."""


class ThinfillError(Exception):
    """Base class for domain errors."""


class TruncationError(ThinfillError):
    """An operation needed simplices above the stated truncation bound."""


class ConnectivityError(ThinfillError):
    """Input was disconnected where a connected complex is required."""

    def __init__(self, message, components=None):
        super().__init__(message)
        self.components = components


class InfiniteOrUnknownFundamentalGroup(ThinfillError):
    """The fundamental group could not be certified finite within budget."""


class RepresentabilityError(ThinfillError):
    """A construction needs data this representation cannot hold."""


class EnumerabilityError(ThinfillError):
    """A level that must be enumerated is not finite."""


class DocumentError(ThinfillError):
    """Malformed input document."""
