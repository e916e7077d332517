class CapacityError(RuntimeError):
    """A request exceeds the configured size ceiling."""


class TruncationWarning(UserWarning):
    """A census window limit cut off runs that still sum to a tracked gap."""
