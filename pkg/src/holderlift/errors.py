"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Malformed input: bad shapes, mismatched grids, out-of-range parameters."""


class NumericalError(ArithmeticError):
    """A computation has no finite answer for the given data."""


class DominationError(NumericalError):
    """The scaling table vanishes where the envelope does not."""
