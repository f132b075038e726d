"""Exception hierarchy shared by every module of the package."""


class NivatError(Exception):
    """Base class for all errors raised by this package."""


class DegenerateSet(NivatError):
    """The convex set has a hull of zero area where positive area is required."""


class EmptyBorder(NivatError):
    """No translate of the small set fits along the requested edge."""


class BadSpec(NivatError):
    """A generator specification has missing or inconsistent parameters."""


class OutOfWindow(NivatError):
    """A requested cell lies outside the stored window."""


class RaggedRows(NivatError):
    """Grid text whose rows do not all have the same length."""

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


class EmptyInput(NivatError):
    """Grid text without any cells."""


class ShapeTooLarge(NivatError):
    """No translate of the shape fits inside the window."""


class NoSuchSubset(NivatError):
    """The container itself already violates the discrepancy target."""


class HypothesisFails(NivatError):
    """A complexity hypothesis (for example D(R_{n,k}) <= 0) does not hold in the window."""


class CollapsedToSegment(NivatError):
    """Strong-set iteration reached a collinear set.

    For an aperiodic configuration this cannot happen, so it is a periodicity
    signal rather than a failure: ``direction`` is the segment direction and
    ``period`` the smallest period found along it inside the window (or None).
    """

    def __init__(self, message, segment=None, direction=None, period=None):
        super().__init__(message)
        self.segment = segment
        self.direction = direction
        self.period = period


class UnverifiedConstruction(NivatError):
    """A constructed set failed direct verification; ``condition`` names the failing clause."""

    def __init__(self, message, condition=None, candidate=None):
        super().__init__(message)
        self.condition = condition
        self.candidate = candidate


class FrameTooLarge(NivatError):
    """Exhaustive completion was requested on too many free cells."""


class HypothesisViolation(NivatError):
    """The caller-supplied data does not satisfy the hypotheses of the forcing step."""

    def __init__(self, message, clause=None):
        super().__init__(message)
        self.clause = clause


class DomainTooShort(NivatError):
    """The finite word is too short for the interval case of the Morse–Hedlund check."""
