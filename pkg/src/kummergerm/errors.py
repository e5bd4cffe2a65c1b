"""Exception hierarchy shared by the library and the command line.

Each class carries the process exit code the CLI reports for it.
"""


class KummerError(Exception):
    exit_code = 2


class UsageError(KummerError):
    exit_code = 1


class InconsistencyError(KummerError):
    """Mathematical inconsistency: violated hypothesis or contradictory data."""

    exit_code = 2


class NonReducedError(InconsistencyError):
    """The special fibre of the cover is not reduced over the current ring."""


class InfeasibleError(InconsistencyError):
    pass


class ParityError(InconsistencyError):
    pass


class MultiplicityError(InconsistencyError):
    """Branch divisor is not reduced; branch counting is not supported."""


class PrecisionError(KummerError):
    """An element became indistinguishable from zero at its working precision."""

    exit_code = 3


class ResolutionLimitError(KummerError):
    exit_code = 2
