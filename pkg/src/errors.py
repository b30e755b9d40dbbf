"""Exception types shared across the surface positivity toolkit."""


class InvariantViolation(ValueError):
    """Raised when a loaded or computed object breaks one of its invariants.

    For Zariski decompositions this usually means the curve catalog of the
    surface is incomplete.
    """
    pass


class LatticeMismatchError(ValueError):
    """Raised when classes living on different lattices are combined."""
    pass


class RingMismatchError(ValueError):
    """Raised when graded classes from different numerical rings are combined."""
    pass


class TwistMismatchError(ValueError):
    """Raised when a direct sum is formed from bundles with unequal twists."""
    pass


class UnknownLabelError(ValueError):
    """Raised when a curve or basis label is not known to the lattice."""
    pass


class DomainError(ValueError):
    """Raised when an operation is called outside its mathematical domain."""
    pass


class SurfaceConfigError(ValueError):
    """Raised when a surface description file is malformed."""
    pass


class ParseError(ValueError):
    """Raised when a class, bundle or partition string cannot be parsed."""

    def __init__(self, text: str, position: int, expected: str, message: str = "Parse error"):
        self.text = text
        self.position = position
        self.expected = expected
        super().__init__(
            f"{message} at position {position}: expected {expected}\n"
            f"  {text}\n"
            f"  {' ' * position}^"
        )
