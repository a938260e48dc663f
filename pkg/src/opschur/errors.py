"""Exception types shared across the package.

Shape and structure problems subclass :class:`ValueError`, iteration
failures subclass :class:`RuntimeError`, so callers that only know the
standard hierarchy still catch the right category.
"""

from __future__ import annotations


class DimensionMismatchError(ValueError):
    """Two operands whose dimensions do not line up.

    Carries both offending shapes so error messages can name them.
    """

    def __init__(self, left, right, context: str = ""):
        self.left = tuple(left)
        self.right = tuple(right)
        what = f" in {context}" if context else ""
        super().__init__(f"dimension mismatch{what}: {self.left} vs {self.right}")


class StructureError(ValueError):
    """An operation received a matrix whose structure it cannot accept."""


class DiagonalRangeError(ValueError):
    """Requested diagonal offset lies outside the matrix."""

    def __init__(self, offset: int, size: int):
        self.offset = offset
        self.size = size
        super().__init__(
            f"diagonal offset {offset} is empty for truncation size {size}"
        )


class CoefficientSupportError(ValueError):
    """A coefficient offset falls outside the stored diagonal range.

    Raised instead of silently truncating the out-of-range data.
    """

    def __init__(self, offset: int, support, context: str = ""):
        self.offset = offset
        self.support = tuple(support)
        what = f" in {context}" if context else ""
        super().__init__(
            f"coefficient offset {offset}{what} is outside the stored "
            f"range {self.support}"
        )


class DiscDomainError(ValueError):
    """Evaluation point does not lie in the open unit disc."""

    def __init__(self, z: complex):
        self.z = z
        super().__init__(f"point {z!r} has modulus {abs(z):.6g} >= 1")


class NonConvergenceError(RuntimeError):
    """An iterative routine hit its iteration cap before converging."""

    def __init__(self, iteration_cap: int, context: str = ""):
        self.iteration_cap = iteration_cap
        what = f"{context}: " if context else ""
        super().__init__(f"{what}no convergence after {iteration_cap} iterations")


class SerializationError(ValueError):
    """Malformed serialized payload; names the offending field."""

    def __init__(self, field: str, reason: str):
        self.field = field
        super().__init__(f"field {field!r}: {reason}")
