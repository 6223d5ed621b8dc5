"""Exception types shared across the package."""


class DefindexError(Exception):
    """Base class for all package-specific errors."""


class FloorBoundaryError(DefindexError, ValueError):
    """floor(n**alpha) cannot be trusted: n**alpha lies within the guard
    band (1e-9) of an integer, so the floor for the exponent the caller
    intended may differ from the floor for the float actually supplied."""


class TruncationError(DefindexError, ValueError):
    """An operation touched boundary vertices whose neighbourhoods are
    incomplete, so the result is not determined by the truncation."""

    def __init__(self, message, vertices=()):
        super().__init__(message)
        self.vertices = tuple(sorted(vertices))


class ContractError(DefindexError, ValueError):
    """A documented precondition of an operation was violated."""


class InvariantViolationError(DefindexError, RuntimeError):
    """Internal data broke a structural invariant (e.g. a_n <= 0)."""


class ReductionInconsistencyError(DefindexError, RuntimeError):
    """The graph-side adjacency action and the reduced Jacobi action
    disagreed beyond tolerance.  Carries the check report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class InternalInconsistencyError(DefindexError, RuntimeError):
    """Two decisive routes (analytic rule vs numerical scan) disagreed.
    Never resolved silently; surfaces as CLI exit code 4."""
