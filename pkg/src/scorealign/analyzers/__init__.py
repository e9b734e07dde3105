"""Scorealign analyzers - the numerical alignment stages.

Analyzers:
- Score units: note events to the sequence of constant note sets
- Frontend: STFT magnitude frames, unit-norm normalization
- Template bank: learned or synthetic harmonic note spectra
- Pattern training: beta-divergence fit of unit amplitudes
- Decomposition: per-frame least squares over consecutive unit pairs
- Distortion: novel and baseline measures, pluggable through the registry
- DTW: minimum-cost monotonic path and unit onsets
"""

from scorealign.analyzers.base import (
    DistortionInputs,
    DistortionMeasure,
    DistortionSettings,
    MeasureNotAvailableError,
)
from scorealign.analyzers.registry import MeasureRegistry, get_registry, reset_registry

__all__ = [
    "DistortionInputs",
    "DistortionMeasure",
    "DistortionSettings",
    "MeasureNotAvailableError",
    "MeasureRegistry",
    "get_registry",
    "reset_registry",
]
