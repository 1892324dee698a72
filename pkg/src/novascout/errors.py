"""Exception types shared across the package."""


class NovaScoutError(Exception):
    """Base class for all package errors."""


class EmptyImageError(NovaScoutError, ValueError):
    """Raised when an operation receives an image with zero width or height."""


class ImageTooSmallError(NovaScoutError, ValueError):
    """Raised when an image is below the minimum pipeline size (16x16)."""


class DegenerateVectorError(NovaScoutError, ValueError):
    """Raised when a spectral angle is requested for a zero vector."""


class DimensionMismatchError(NovaScoutError, ValueError):
    """Raised when rasters that must share dimensions do not."""


class MissingVerdictError(NovaScoutError, KeyError):
    """Raised when a novelty map is rendered without a verdict for a segment."""


class DecodeError(NovaScoutError, ValueError):
    """Raised when an image file cannot be decoded."""

    def __init__(self, path, reason):
        super().__init__(f"cannot decode {path}: {reason}")
        self.path = str(path)
        self.reason = reason


class SequenceProcessingError(NovaScoutError):
    """Wraps a per-image failure inside a sequence with the failing index."""

    def __init__(self, image_index, cause):
        super().__init__(f"image {image_index}: {cause}")
        self.image_index = image_index
        self.cause = cause


class ConfigError(NovaScoutError, ValueError):
    """Raised for session configuration values outside their invariants."""

    def __init__(self, field, message):
        super().__init__(f"invalid config field {field!r}: {message}")
        self.field = field


class UnknownSessionError(NovaScoutError, KeyError):
    """Raised when a session id is not known to the service."""

    def __init__(self, session_id):
        super().__init__(f"unknown session: {session_id}")
        self.session_id = session_id


class PayloadTooLargeError(NovaScoutError, ValueError):
    """Raised when an uploaded image exceeds the configured byte cap."""
