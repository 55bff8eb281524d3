"""Exception types raised by the library."""


class InvalidArgumentError(ValueError):
    """An input violates a documented precondition."""


class SingularityError(InvalidArgumentError):
    """A cumulant order hits the ``n * alpha == 2`` pole of the radial integral."""
