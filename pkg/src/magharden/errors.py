"""Exception types shared across the package."""


class MagHardenError(Exception):
    """Base class for all package errors."""


class NotQuasiSelfAdjoint(MagHardenError):
    """Raised when a bounded positive metric cannot exist (mean of Im a is nonzero)."""


class FluxConditionFailed(MagHardenError):
    """The flux hypothesis gating a Hardy constant does not hold."""


class SupportExceedsR(MagHardenError):
    pass


class HypothesisViolated(MagHardenError):
    """A decay hypothesis on the imaginary part of the vector potential failed."""


class TrivialField(MagHardenError):
    pass


class NotConverged(MagHardenError):
    """A numerical procedure did not reach its convergence criterion."""


class ResolutionWarning(UserWarning):
    pass
