"""Exception types shared across the simulation engines."""


class MitigationLabError(Exception):
    """Base class for errors raised by this package."""


class SignedModeError(MitigationLabError, RuntimeError):
    """A sign-resolved observable was requested on an unsigned replica state."""


class NonFiniteEnsembleError(MitigationLabError, RuntimeError):
    """Every realization of an ensemble produced a non-finite value."""


class QuasiProbabilityError(MitigationLabError, ValueError):
    """Sampling was requested from a distribution with negative entries."""


class DegenerateFieldError(MitigationLabError, ValueError):
    """A quenched noise field has no low-noise site to seed an instability."""


class ConsistencyError(MitigationLabError, RuntimeError):
    """An analytic identity checked at runtime did not hold."""
