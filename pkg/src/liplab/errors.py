"""Exceptions raised by liplab."""


class LiplabError(Exception):
    """Base class for all liplab errors."""


class NonAdjacentStep(LiplabError, ValueError):
    """A path moves between two points that are not joined by an edge."""


class EmptySet(LiplabError, ValueError):
    """An operation that takes an infimum over a point set got an empty set."""


class NotQuasiConvex(LiplabError):
    """The edge graph is disconnected, so the length metric is infinite somewhere."""


class ThresholdTooCoarse(LiplabError):
    """The perturbation scale cannot lift singular points above the threshold.

    Raised when ``lam <= 2 * tau``. Shrink ``tau`` or raise ``delta``.
    """

    def __init__(self, lam, tau):
        self.lam = lam
        self.tau = tau
        super().__init__(
            f"perturbation scale {lam!r} must exceed 2*tau = {2 * tau!r}")


class IdMismatch(LiplabError, ValueError):
    """A field file does not cover the point ids of its space exactly once."""
