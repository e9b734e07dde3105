"""Alignment entities.

- FrameDecomposition: note coefficients and residual energy of one (k, t) cell
- DecompositionTable: the K x T grid of decompositions, stored row-wise as arrays
- DistortionKind / DistortionMatrix: D(k, t) for the novel or baseline measure
- AlignmentPath: monotonic (k, t) path with per-unit onsets
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np

from scorealign.errors import ValidationError
from scorealign.models.score import NoteKey
from scorealign.models.spectral import FrontendConfig


@dataclass(frozen=True)
class FrameDecomposition:
    """Decomposition of one frame over a note subspace.

    Attributes:
        coeffs: Coefficient per note of the subspace (empty for silent frames)
        residual_norm_sq: Squared Euclidean norm of the residual
    """

    coeffs: dict[NoteKey, float]
    residual_norm_sq: float


@dataclass
class DecompositionRow:
    """All frame decompositions for one consecutive-unit pair (k, k+1).

    Only coefficients and residual scalars are kept, never residual vectors.

    Attributes:
        keys: Notes of unit_union(k) in canonical order (columns of coeffs)
        coeffs: T x n coefficient array
        residual_norm_sq: Length-T residual energies
    """

    keys: list[NoteKey]
    coeffs: np.ndarray
    residual_norm_sq: np.ndarray


@dataclass
class DecompositionTable:
    """K x T grid of frame decompositions.

    Attributes:
        rows: One DecompositionRow per unit k
        silent: Length-T mask of silent frames
    """

    rows: list[DecompositionRow]
    silent: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        """(K, T)."""
        return len(self.rows), int(self.silent.shape[0])

    def __getitem__(self, cell: tuple[int, int]) -> FrameDecomposition:
        k, t = cell
        row = self.rows[k]
        if self.silent[t]:
            return FrameDecomposition(coeffs={}, residual_norm_sq=0.0)
        return FrameDecomposition(
            coeffs={key: float(row.coeffs[t, i]) for i, key in enumerate(row.keys)},
            residual_norm_sq=float(row.residual_norm_sq[t]),
        )


class DistortionKind(Enum):
    """Which distortion definition filled a matrix."""

    NOVEL = "novel"
    BASELINE = "baseline"


@dataclass
class DistortionMatrix:
    """K x T cost matrix D(k, t).

    Attributes:
        values: Nonnegative finite costs, rows indexed by unit k
        kind: Distortion definition used
        beta: Beta-divergence parameter for the baseline kind
        config: Frontend config of the frames (for onset times); None if unknown
    """

    values: np.ndarray
    kind: DistortionKind = DistortionKind.NOVEL
    beta: float | None = None
    config: FrontendConfig | None = None

    def __post_init__(self) -> None:
        """Validate cost invariants."""
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise ValidationError(f"distortion matrix must be 2-D (got {self.values.shape})")
        if not np.all(np.isfinite(self.values)) or np.any(self.values < 0):
            raise ValidationError("distortion values must be finite and nonnegative")

    @property
    def shape(self) -> tuple[int, int]:
        """(K, T)."""
        return int(self.values.shape[0]), int(self.values.shape[1])


@dataclass
class AlignmentPath:
    """Minimum-cost monotonic path through a distortion matrix.

    Attributes:
        steps: (k, t) pairs, one per frame t in order
        onset_frames: First frame index assigned to each unit k
        onset_times: Onset time in seconds per unit (empty when no config was known)
        total_cost: Sum of D over the path
    """

    steps: list[tuple[int, int]]
    onset_frames: dict[int, int]
    total_cost: float
    onset_times: dict[int, float] = field(default_factory=dict)

    @property
    def path_length(self) -> int:
        """Number of steps (equals T)."""
        return len(self.steps)

    def to_dict(self) -> dict[str, Any]:
        """Convert to the alignment output JSON."""
        return {
            "onsets": [
                {"k": k, "time_s": self.onset_times[k]} for k in sorted(self.onset_times)
            ],
            "total_cost": self.total_cost,
            "path_length": self.path_length,
        }
