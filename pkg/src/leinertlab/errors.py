"""Exception types shared across the toolkit."""


class ResourceCapError(RuntimeError):
    """A computation would exceed a configured size cap."""

    def __init__(self, what, size, cap):
        super().__init__(f"{what}: size {size} exceeds cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


class WordParseError(ValueError):
    def __init__(self, text, position, message):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position


class GridResolutionError(ValueError):
    """The frequency grid cannot represent the requested function."""
