"""Abstract base class for distortion measures.

A measure turns (frames, score units, patterns, templates) into a K x T cost
matrix. Each measure:
1. Validates that its inputs share one frontend config
2. Computes one row of costs per score unit
3. Returns a DistortionMatrix tagged with its kind
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any

from scorealign.analyzers.divergence import check_beta
from scorealign.errors import ValidationError
from scorealign.models.alignment import DecompositionTable, DistortionKind, DistortionMatrix
from scorealign.models.bank import TemplateBank
from scorealign.models.patterns import UnitPattern
from scorealign.models.score import ScoreTimeline
from scorealign.models.spectral import Spectrogram


@dataclass(frozen=True)
class DistortionSettings:
    """Options shared by the distortion measures.

    Attributes:
        beta: Beta-divergence parameter of the baseline measure
        normalized_alphas: Rescale alphas so that ||sum(alpha * n)|| == 1 (novel)
        squared_distance: Use the squared coefficient distance (novel)
        nonnegative: Constrain frame decomposition coefficients to >= 0 (novel)
        threads: Worker threads for row-parallel evaluation
    """

    beta: float = 2.0
    normalized_alphas: bool = True
    squared_distance: bool = False
    nonnegative: bool = True
    threads: int = 1

    def __post_init__(self) -> None:
        """Validate settings."""
        check_beta(self.beta)
        if self.threads < 1:
            raise ValidationError(f"threads must be >= 1 (got {self.threads})")


@dataclass
class DistortionInputs:
    """Everything a measure needs to fill a matrix.

    Attributes:
        spectrogram: Normalized performance frames
        timeline: Score units (rows)
        patterns: One pattern per unit, in timeline order
        bank: Note templates
        decomposition: Precomputed frame decompositions to reuse (novel)
    """

    spectrogram: Spectrogram
    timeline: ScoreTimeline
    patterns: list[UnitPattern]
    bank: TemplateBank
    decomposition: DecompositionTable | None = None

    def validate(self) -> None:
        """Check frame normalization, config agreement and pattern alignment."""
        if not self.spectrogram.normalized:
            raise ValidationError("distortion needs a normalized spectrogram")
        self.bank.require_config(self.spectrogram.config)
        if len(self.patterns) != len(self.timeline):
            raise ValidationError(
                f"{len(self.patterns)} patterns for {len(self.timeline)} score units"
            )
        for k, (pattern, unit) in enumerate(zip(self.patterns, self.timeline.units, strict=True)):
            if pattern.unit_index != k or set(pattern.alphas) != set(unit.notes):
                raise ValidationError(f"pattern {k} does not belong to score unit {k}")
        if self.decomposition is not None and self.decomposition.shape != (
            len(self.timeline),
            self.spectrogram.n_frames,
        ):
            raise ValidationError(
                f"decomposition table is {self.decomposition.shape[0]}x{self.decomposition.shape[1]}, "
                f"expected {len(self.timeline)}x{self.spectrogram.n_frames}"
            )


class DistortionMeasure(ABC):
    """Abstract interface for pluggable distortion definitions.

    Adding a new measure MUST NOT require changes outside its own class and
    its registration.

    Attributes:
        name: Registry identifier (e.g., "novel", "baseline")
        kind: Kind recorded on produced matrices
        settings: Measure options
    """

    kind: DistortionKind

    def __init__(self, name: str, settings: DistortionSettings | None = None) -> None:
        """Initialize the measure.

        Args:
            name: Registry identifier
            settings: Measure options (defaults when None)
        """
        self.name = name
        self.settings = settings or DistortionSettings()

    @abstractmethod
    def compute(self, inputs: DistortionInputs) -> DistortionMatrix:
        """Fill the K x T distortion matrix.

        Args:
            inputs: Frames, units, patterns and templates

        Returns:
            DistortionMatrix with one row per score unit
        """

    def get_metadata(self) -> dict[str, Any]:
        """Get measure metadata for logging and debugging."""
        return {
            "name": self.name,
            "kind": self.kind.value,
            "beta": self.settings.beta,
            "normalized_alphas": self.settings.normalized_alphas,
            "squared_distance": self.settings.squared_distance,
            "nonnegative": self.settings.nonnegative,
        }


class MeasureNotAvailableError(ValidationError):
    """Raised when a distortion measure name is not registered."""

    def __init__(self, name: str, available: list[str]) -> None:
        self.name = name
        self.available = available
        super().__init__(f"Distortion measure '{name}' not registered. Available: {available}")
