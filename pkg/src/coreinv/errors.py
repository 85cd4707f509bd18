"""Exception types raised by the toolkit."""


class CoreInvError(Exception):
    """Base class for all toolkit errors."""


class Singular(CoreInvError, ArithmeticError):
    """Matrix is not invertible at the given tolerance."""


class NotGroupInvertible(CoreInvError, ArithmeticError):
    """rank(A) != rank(A^2), so no group inverse exists."""

    def __init__(self, msg, rank_a=None, rank_a2=None):
        super().__init__(msg)
        self.rank_a = rank_a
        self.rank_a2 = rank_a2


class NotCoreInvertible(NotGroupInvertible):
    """No core inverse exists (over complex matrices: not group invertible)."""


class NotIdempotent(CoreInvError, ValueError):
    pass


class NotProjection(CoreInvError, ValueError):
    pass


class HypothesisNotMet(CoreInvError, ValueError):
    """A sufficient condition of a constructive formula fails.

    This does not claim that the inverse does not exist.
    """


class VerificationError(CoreInvError, ArithmeticError):
    """A constructed result failed its own postcondition check."""


class GenerationExhausted(CoreInvError, RuntimeError):
    pass


class NotApplicable(CoreInvError, ValueError):
    pass
