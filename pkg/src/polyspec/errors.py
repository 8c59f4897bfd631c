"""Exception hierarchy shared across the package."""


class PolyspecError(Exception):
    """Base class for all errors raised by this package."""


class BackendMismatchError(PolyspecError):
    """Operands live over different scalar backends."""


class DegreeError(PolyspecError):
    """Input polynomial has an unsupported degree (zero, constant, ...)."""


class DegreeOverflowError(PolyspecError):
    """An iterate would exceed the configured coefficient-blowup cap."""


class ExactDivisionError(PolyspecError):
    """A division that should be exact left a nonzero remainder."""


class NotPthPowerError(PolyspecError):
    """Coefficient matching found the input is not an exact p-th power."""


class RootFindingError(PolyspecError):
    """The simultaneous root finder failed to converge to all roots."""

    def __init__(self, message, worst_residual=None):
        super().__init__(message)
        self.worst_residual = worst_residual


class CycleGroupingError(PolyspecError):
    """Periodic points could not be grouped into unambiguous cycles."""


class NormalFormError(PolyspecError):
    """A normal form (monic-centered, critically marked) is unavailable."""


class WindowExhaustedError(PolyspecError):
    """A truncated series lost certification of its leading term."""


class RamificationError(PolyspecError):
    """A series exponent denominator exceeds the configured cap."""


class ReconstructionError(PolyspecError):
    """No candidate passed validation during a moduli reconstruction."""
