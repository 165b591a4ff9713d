"""Exception hierarchy shared by all analysis modules."""


class HopfxError(Exception):
    """Base class for all hopfx errors."""


class DomainError(HopfxError):
    """The requested quantity does not exist for these parameters
    (no positive equilibrium, no Hopf frequency, case II, ...)."""


class NumericalError(HopfxError):
    """A numerical procedure failed to converge or became ill-conditioned."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
