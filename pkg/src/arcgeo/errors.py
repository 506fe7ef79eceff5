"""Exception types shared across the package."""


class VerificationError(Exception):
    """A checked configuration fails its defining property.

    Carries a short machine-readable reason and a witness object naming the
    offending line/point/pair, for diagnostics and CLI output.
    """

    def __init__(self, reason, witness=None):
        super().__init__(reason if witness is None else f"{reason}: {witness}")
        self.reason = reason
        self.witness = witness


class ConsistencyError(RuntimeError):
    """An invariant that must hold on verified input was violated (bug signal)."""
