"""Exception types shared across the package.

The CLI maps these onto exit codes: parse problems exit 2, failed
verifications exit 1 and exceeded size/round caps exit 3.
"""


class SpectralBohrError(Exception):
    """Base class for every error raised by this package."""


class GroupSpecError(SpectralBohrError, ValueError):
    """Malformed group description (bad factor, bad grammar)."""


class SizeCapError(SpectralBohrError):
    """A group, set or loop exceeded its configured size cap."""


class GroupMismatchError(SpectralBohrError, ValueError):
    """Objects living on different groups were combined."""


class WrongGroupKindError(SpectralBohrError, ValueError):
    """The operation needs a particular kind of group (e.g. a power of Z/2)."""


class DegenerateInputError(SpectralBohrError, ValueError):
    """Input for which the requested quantity is undefined (zero function, empty set)."""


class ParameterError(SpectralBohrError, ValueError):
    """A numeric parameter lies outside its admissible range."""


class NotDissociatedError(SpectralBohrError, ValueError):
    """A set required to be dissociated is not."""


class VerificationError(SpectralBohrError, AssertionError):
    """A certified inequality or containment failed when checked exhaustively."""


class RegularityError(SpectralBohrError):
    """No regular width was found among the candidates.

    ``best_delta`` and ``best_constant`` describe the least irregular
    candidate so callers can retry with a larger constant.
    """

    def __init__(self, message, best_delta, best_constant):
        super().__init__(message)
        self.best_delta = best_delta
        self.best_constant = best_constant


class WidthUnderflowError(SpectralBohrError):
    """A Bohr width fell below the resolution of the group."""


class RoundBudgetError(SizeCapError):
    """An iteration exceeded its hard round cap."""
