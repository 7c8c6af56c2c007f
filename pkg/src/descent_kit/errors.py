"""Exception hierarchy shared by every module."""


class DescentError(Exception):
    pass


class InputError(DescentError, ValueError):
    """Malformed input: unknown identifiers, invalid structure, bad documents."""


class PreconditionError(DescentError, ValueError):
    """An operation was called outside its stated hypotheses."""


class PullbackUnavailable(DescentError):
    """A lax pullback needs a meet the base does not have."""


class CoequalizerUnavailable(DescentError):
    """A lax coequalizer needs a join the base does not have."""


class BudgetExceeded(DescentError):
    """Enumeration hit its configured candidate cap."""

    def __init__(self, message: str, explored: int = 0):
        super().__init__(message)
        self.explored = explored


class VerificationError(DescentError, AssertionError):
    """A construction failed its own postcondition check."""
