"""Pattern training entities.

- TrainingRender: spectral rendering of one unit, with per-frame gains once fitted
- UnitPattern: note amplitudes and composite basis of one unit
"""

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from scorealign.errors import ValidationError
from scorealign.models.bank import TemplateBank
from scorealign.models.score import NoteKey, sorted_keys

# Tolerance when checking a stored basis against its recomputation
BASIS_TOLERANCE = 1e-9


@dataclass
class TrainingRender:
    """Spectral rendering of one score unit.

    Attributes:
        unit_index: Unit ordinal k
        spectrogram: tau x F nonnegative magnitudes
        gains: Per-frame temporal activity; None until fitted
    """

    unit_index: int
    spectrogram: np.ndarray
    gains: np.ndarray | None = None

    def __post_init__(self) -> None:
        """Validate sign invariants."""
        self.spectrogram = np.asarray(self.spectrogram, dtype=np.float64)
        if self.spectrogram.ndim != 2 or np.any(self.spectrogram < 0):
            raise ValidationError("training render must be a nonnegative 2-D array")
        if self.gains is not None and np.any(self.gains < 0):
            raise ValidationError("training gains must be nonnegative")


@dataclass
class UnitPattern:
    """Learned spectral pattern of one unit.

    Attributes:
        unit_index: Unit ordinal k
        alphas: Nonnegative amplitude per note of the unit (keys = the unit's note set)
        basis: Unit-norm composite spectrum (all zeros for silence or degenerate fits)
        composite_norm: Euclidean norm of sum(alpha * n) before normalization
        degenerate: True when the fit explained no energy
        objective_history: Objective value after every fitting iteration
    """

    unit_index: int
    alphas: dict[NoteKey, float]
    basis: np.ndarray
    composite_norm: float = 0.0
    degenerate: bool = False
    objective_history: tuple[float, ...] = field(default=(), repr=False)

    def __post_init__(self) -> None:
        """Validate amplitude signs."""
        self.basis = np.asarray(self.basis, dtype=np.float64)
        if any(alpha < 0 for alpha in self.alphas.values()):
            raise ValidationError(f"unit {self.unit_index} has a negative alpha")

    @classmethod
    def silence(cls, unit_index: int, n_bins: int) -> "UnitPattern":
        """Pattern of a silence unit: no alphas, zero basis."""
        return cls(unit_index=unit_index, alphas={}, basis=np.zeros(n_bins))

    @property
    def keys(self) -> list[NoteKey]:
        """Note keys in canonical order."""
        return sorted_keys(set(self.alphas))

    def scaled_alphas(self, normalized: bool = True) -> dict[NoteKey, float]:
        """Return alphas rescaled so that ||sum(alpha * n)|| == 1.

        Args:
            normalized: When False, return the raw alphas unchanged
        """
        if not normalized:
            return dict(self.alphas)
        if self.composite_norm <= 0:
            return {key: 0.0 for key in self.alphas}
        return {key: alpha / self.composite_norm for key, alpha in self.alphas.items()}

    def recompute_basis(self, bank: TemplateBank) -> tuple[np.ndarray, float]:
        """Rebuild (normalized basis, composite norm) from alphas and the bank."""
        keys = self.keys
        composite = bank.matrix(keys) @ np.array([self.alphas[key] for key in keys], dtype=np.float64)
        norm = float(np.linalg.norm(composite))
        if norm == 0.0:
            return np.zeros(bank.config.n_bins), 0.0
        return composite / norm, norm

    def to_dict(self) -> dict[str, Any]:
        """Convert to the patterns JSON unit entry."""
        return {
            "k": self.unit_index,
            "alphas": [
                {"pitch": pitch, "instrument": instrument, "alpha": self.alphas[(pitch, instrument)]}
                for pitch, instrument in self.keys
            ],
            "basis": self.basis.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any], bank: TemplateBank) -> "UnitPattern":
        """Build from a patterns JSON unit entry, checking the stored basis."""
        alphas = {
            (int(entry["pitch"]), str(entry["instrument"])): float(entry["alpha"])
            for entry in data.get("alphas", [])
        }
        pattern = cls(
            unit_index=int(data["k"]),
            alphas=alphas,
            basis=np.asarray(data["basis"], dtype=np.float64),
        )
        basis, norm = pattern.recompute_basis(bank)
        if pattern.basis.shape != basis.shape or np.max(
            np.abs(pattern.basis - basis), initial=0.0
        ) > BASIS_TOLERANCE:
            raise ValidationError(
                f"stored basis of unit {pattern.unit_index} does not match its alphas and the bank"
            )
        pattern.composite_norm = norm
        pattern.degenerate = bool(alphas) and norm == 0.0
        return pattern
