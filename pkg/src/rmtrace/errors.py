"""Exception types shared across the package."""


class InvalidParameter(ValueError):
    """An argument is outside the documented domain."""


class UnsupportedParameter(InvalidParameter):
    """An argument is valid in general but outside the supported guarantee domain."""


class InvalidFormat(ValueError):
    """Text could not be parsed into the requested value."""


class ResourceLimit(RuntimeError):
    """A request exceeds a configured size guard."""


class ChannelDegenerate(RuntimeError):
    """The channel cannot produce the requested output (e.g. non-empty traces at q=1)."""
