"""Exception types shared across the package."""


class EmptyAggregate(ValueError):
    """combine_all was given an empty sequence."""


class DimensionMismatch(ValueError):
    """Operands have different dimensionality."""


class TooLarge(ValueError):
    """An exhaustive computation exceeds its size guard."""


class Unsupported(ValueError):
    """Requested parameters are outside the supported range."""


class IneligibleSum(ValueError):
    """A sum was passed where an eligible sum is required."""


class MalformedQuery(ValueError):
    """Query box does not match the structure's (d+k)-sided shape."""
