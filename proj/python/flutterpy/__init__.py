"""Flutter instability and Green's tensor of nonassociative elastoplastic solids."""

from ._core import (
    ConfigError,
    IoError,
    MaterialState,
    NumericalError,
    acoustic_spectrum,
    cisi,
    flutter_fans,
    greens_at,
    planewave_bracket,
    reference_case,
    sample_grid,
    thresholds,
)

__all__ = [
    "ConfigError",
    "IoError",
    "MaterialState",
    "NumericalError",
    "acoustic_spectrum",
    "cisi",
    "flutter_fans",
    "greens_at",
    "planewave_bracket",
    "reference_case",
    "sample_grid",
    "thresholds",
]
