"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Operands live on charts (or bundles) of different dimension."""


class DegreeError(ValueError):
    """A form has the wrong degree for the requested operation."""


class RankError(ValueError):
    """Operation needs a bundle of a specific rank."""


class RangeError(ValueError):
    """A parameter is outside the range an operation is defined on."""


class NotAJetForm(ValueError):
    """A generic form fails the jet-form membership condition."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness or []


class PreconditionError(ValueError):
    """An operation was called on input that violates its precondition."""


class DegeneracyError(ValueError):
    """Generators that should be independent are dependent at a point."""
