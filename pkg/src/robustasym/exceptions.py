"""Exception types raised across the package."""


class DimensionError(ValueError):
    """Two objects disagree on the number of vertices."""


class DomainError(ValueError):
    """A parameter lies outside its admissible range."""


class NormalizationError(ValueError):
    """The normalized distance is undefined (a graph with no edges)."""


class FingerprintMismatchError(ValueError):
    """A profile was computed for a different graph."""


class BudgetExceededError(RuntimeError):
    """Exhaustive enumeration would exceed the caller's budget.

    The exact number of permutations that would be evaluated is kept in
    ``count`` so callers can decide whether to fall back to the heuristic.
    """

    def __init__(self, count, budget, k=None):
        self.count = count
        self.budget = budget
        self.k = k
        where = f" at k={k}" if k is not None else ""
        super().__init__(
            f"exact enumeration{where} needs {count} permutations, budget is "
            f"{budget}; use the heuristic search instead"
        )


class EdgeListFormatError(ValueError):
    """Malformed edge-list file; ``lineno`` is 1-based."""

    def __init__(self, lineno, message):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


class SearchOverflowError(RuntimeError):
    """A bounded search visited more nodes than allowed."""
