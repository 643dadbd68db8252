"""Klein-Gordon scattering on a rotating de Sitter black hole, at one
fixed axial mode: background geometry, angular eigenbasis, evolution
generators, exact comparison transport, wave operators, horizon traces,
and the characteristic-data round trip."""

__version__ = "0.1.0"

from .errors import (
    AdmissibilityError,
    BlowupError,
    ConfigError,
    DomainError,
    DSKerrError,
    GridError,
    MembershipError,
    NegativeQuadraticForm,
    NoConvergence,
    NoHorizonGap,
    NoStabilization,
    ShapeError,
)
from .geometry import RadialChart, SpacetimeParams, build_background, find_horizons

__all__ = [
    "__version__",
    "AdmissibilityError",
    "BlowupError",
    "ConfigError",
    "DomainError",
    "DSKerrError",
    "GridError",
    "MembershipError",
    "NegativeQuadraticForm",
    "NoConvergence",
    "NoHorizonGap",
    "NoStabilization",
    "ShapeError",
    "RadialChart",
    "SpacetimeParams",
    "build_background",
    "find_horizons",
]
