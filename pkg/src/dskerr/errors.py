"""Exception types shared across the package.

Everything raised on purpose derives from DSKerrError so callers (and the
CLI) can distinguish "the run is wrong" from genuine bugs.
"""


class DSKerrError(Exception):
    """Base class for all package-specific failures."""


class ConfigError(DSKerrError):
    """A run configuration violates a documented invariant."""


class DomainError(DSKerrError):
    """A physical argument (radius, angle, parameter) is out of range."""


class NoHorizonGap(DSKerrError):
    """The radial horizon function does not have two simple positive roots
    with a positive gap between them, so there is no static-type region to
    work in (e.g. 9*Lambda*M^2 >= 1 at a=0, or spin large enough to destroy
    the root ordering)."""


class GridError(DSKerrError):
    """The discretization cannot represent what was asked of it (too few
    nodes per e-folding, data leaking into the guard band, a shift off the
    grid, ...)."""


class ShapeError(DSKerrError):
    """Arrays do not conform to the grid they are claimed to live on."""


class NegativeQuadraticForm(DSKerrError):
    """A quadratic form that must be positive semidefinite evaluated
    significantly below zero; the discrete assembly is broken."""


class BlowupError(DSKerrError):
    """A time integration left the trust region (norm above 1e6 x initial)."""


class NoConvergence(DSKerrError):
    """A Cauchy-monitored limit failed to meet its tolerance in the allotted
    time.  Carries the recorded history and the fitted decay rate so the
    failure is diagnosable."""

    def __init__(self, message, history=None, rate=None):
        super().__init__(message)
        self.history = history
        self.rate = rate


class NoStabilization(DSKerrError):
    """A horizon trace kept changing instead of settling.  Carries the last
    residual."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class AdmissibilityError(DSKerrError):
    """The phased integral condition required by the two-characteristic
    evolution formula is violated beyond tolerance."""


class MembershipError(DSKerrError):
    """A state claimed to satisfy a one-characteristic membership relation
    does not."""
