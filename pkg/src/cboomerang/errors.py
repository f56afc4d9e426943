"""Exception types shared across the package."""


class FieldError(ValueError):
    """Invalid field parameters or element."""


class EnumerationCapError(RuntimeError):
    """An exhaustive scan would exceed the configured enumeration cap."""

    def __init__(self, size, cap, what="enumeration"):
        self.size = size
        self.cap = cap
        super().__init__(f"{what} of {size} points exceeds the enumeration cap {cap}")


class HypothesisError(ValueError):
    """A bound was requested for an instance outside the bound's hypotheses."""


class NotBijectiveError(ValueError):
    """A permutation was required but the map is not bijective."""
