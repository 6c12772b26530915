"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: validation problems exit with 2,
divergence (including undefined star values) with 3, and missing semiring
capabilities with 4.
"""


class WpdaError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(WpdaError):
    """A machine, grammar, or input file violates a structural requirement."""


class NotBottomUpError(ValidationError):
    pass


class NotTopDownError(ValidationError):
    pass


class NotSimpleError(ValidationError):
    pass


class NotNormalFormError(ValidationError):
    pass


class StructureError(ValidationError):
    """A transformation input has a shape the construction does not cover."""


class StackMismatchError(WpdaError):
    """A transition was applied to a configuration whose stack does not
    end in the transition's popped string."""


class DivergenceError(WpdaError):
    """A fixed-point computation failed to converge within its iteration cap."""

    def __init__(self, message, residual=None, worst_entry=None):
        super().__init__(message)
        self.residual = residual
        self.worst_entry = worst_entry


class StarUndefinedError(DivergenceError):
    """The star of a semiring value (often a Lehmann pivot) does not exist."""

    def __init__(self, message, index_pair=None):
        super().__init__(message)
        self.index_pair = index_pair


class CapabilityError(WpdaError):
    """The selected semiring lacks a flag required by the operation."""
