"""Exceptions shared across the package."""


class FuelExhausted(RuntimeError):
    """The step budget ran out before the computation finished.

    ``deepest`` holds the longest chain of recursion labels seen while the
    budget was live, which usually points at the non-wellfounded descent.
    """

    def __init__(self, budget, deepest=()):
        self.budget = budget
        self.deepest = tuple(deepest)
        super().__init__(f"fuel exhausted after {budget} steps (depth {len(self.deepest)})")


class ContractViolation(RuntimeError):
    """A realizer or caller broke a checkable contract."""


class GuaranteeViolated(RuntimeError):
    """No good pair lies below the computed bound."""


class SpecParseError(ValueError):
    """A sequence description could not be parsed."""
