"""Exception hierarchy shared by the engines and the command line."""


class PfwinError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(PfwinError, ValueError):
    """A weight, degree or bundle description is malformed."""


class InvalidWindowError(InvalidInputError):
    """A window tuple violates ``m_l <= m_{l+1} <= m_l + 1``."""


class CertificationError(PfwinError):
    """A vanishing verdict could not be backed by a finite scan bound."""


class InconsistencyError(PfwinError):
    """An internal identity that must hold (triangularity, parity) failed."""


class SignConventionError(InconsistencyError):
    """The pinned global sign for Koszul / shriek classes disagrees with a check."""


class WordError(PfwinError, ValueError):
    """A loop or path word could not be parsed, composed or reduced."""
