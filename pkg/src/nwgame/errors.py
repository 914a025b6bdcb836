"""Exception types shared across the package."""


class SearchExhausted(RuntimeError):
    """A bounded randomized search ran out of attempts."""


class CapabilityError(RuntimeError):
    """A strategy invoked an oracle its capability flags do not allow."""


class ValidationError(ValueError):
    """An artifact failed its exhaustive validity check."""
