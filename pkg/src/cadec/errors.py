class ParameterError(ValueError):
    """Invalid argument; ``param`` names the offending parameter."""

    def __init__(self, message: str, param: str | None = None):
        super().__init__(message)
        self.param = param


class CapExceededError(ParameterError):
    """Requested enumeration is larger than the configured cap."""
