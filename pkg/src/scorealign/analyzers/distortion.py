"""Distortion matrices D(k, t).

Two measures are provided:
- novel: distance between the frame's subspace coefficients over the notes of
  units k and k+1 and the unit-k amplitudes, plus the residual energy
- baseline: beta-divergence between the unit-k composite basis and the frame
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

import numpy as np

from scorealign.analyzers.base import (
    DistortionInputs,
    DistortionMeasure,
    DistortionSettings,
)
from scorealign.analyzers.decomposition import decompose_all
from scorealign.analyzers.divergence import beta_divergence, check_beta
from scorealign.models.alignment import (
    DecompositionRow,
    DecompositionTable,
    DistortionKind,
    DistortionMatrix,
    FrameDecomposition,
)
from scorealign.models.bank import TemplateBank
from scorealign.models.patterns import UnitPattern
from scorealign.models.score import ScoreTimeline
from scorealign.models.spectral import Spectrogram

logger = logging.getLogger(__name__)


def novel_distortion_cell(
    dec: FrameDecomposition,
    pattern: UnitPattern,
    *,
    normalized_alphas: bool = True,
    squared: bool = False,
) -> float:
    """Cost of frame t against unit k from its (k, k+1) decomposition.

    D = sqrt(sum (a - alpha~)^2) + ||r||^2, summed over notes(k) | notes(k+1);
    alpha~ is zero for notes only in unit k+1.

    Args:
        dec: Decomposition of the frame over unit_union(k)
        pattern: Pattern of unit k
        normalized_alphas: Compare against alphas rescaled to a unit-norm composite
        squared: Drop the square root on the coefficient distance
    """
    target = pattern.scaled_alphas(normalized_alphas)
    distance_sq = sum(
        (dec.coeffs.get(key, 0.0) - target.get(key, 0.0)) ** 2
        for key in set(dec.coeffs) | set(target)
    )
    distance = distance_sq if squared else float(np.sqrt(distance_sq))
    return float(distance + dec.residual_norm_sq)


def baseline_distortion_cell(x: np.ndarray, pattern: UnitPattern, beta: float) -> float:
    """Beta-divergence between a unit basis and a unit-norm frame.

    Raises:
        ValidationError: If beta == 0
    """
    return float(beta_divergence(pattern.basis, x, beta))


def _novel_row(
    row: DecompositionRow,
    pattern: UnitPattern,
    normalized_alphas: bool,
    squared: bool,
) -> np.ndarray:
    target = pattern.scaled_alphas(normalized_alphas)
    alpha = np.array([target.get(key, 0.0) for key in row.keys], dtype=np.float64)
    distance_sq = np.sum((row.coeffs - alpha) ** 2, axis=1)
    distance = distance_sq if squared else np.sqrt(distance_sq)
    return distance + row.residual_norm_sq


class NovelDistortion(DistortionMeasure):
    """Subspace-coefficient distortion over consecutive unit pairs."""

    kind = DistortionKind.NOVEL

    def compute(self, inputs: DistortionInputs) -> DistortionMatrix:
        inputs.validate()
        table = inputs.decomposition
        if table is None:
            table = decompose_all(
                inputs.spectrogram,
                inputs.timeline,
                inputs.bank,
                nonnegative=self.settings.nonnegative,
                threads=self.settings.threads,
            )
        # Silent frames carry zero coefficients and zero residual in every row
        values = np.vstack(
            [
                _novel_row(
                    row,
                    pattern,
                    self.settings.normalized_alphas,
                    self.settings.squared_distance,
                )
                for row, pattern in zip(table.rows, inputs.patterns, strict=True)
            ]
        )
        return DistortionMatrix(values=values, kind=self.kind, config=inputs.spectrogram.config)


class BaselineDistortion(DistortionMeasure):
    """Beta-divergence between unit bases and frames."""

    kind = DistortionKind.BASELINE

    def compute(self, inputs: DistortionInputs) -> DistortionMatrix:
        inputs.validate()
        beta = check_beta(self.settings.beta)
        frames = inputs.spectrogram.frames

        def row(pattern: UnitPattern) -> np.ndarray:
            return np.asarray(beta_divergence(pattern.basis[None, :], frames, beta, axis=1))

        with ThreadPoolExecutor(max_workers=self.settings.threads) as pool:
            rows = list(pool.map(row, inputs.patterns))
        values = np.maximum(np.vstack(rows), 0.0)
        return DistortionMatrix(
            values=values, kind=self.kind, beta=beta, config=inputs.spectrogram.config
        )


def build_matrix(
    spectrogram: Spectrogram,
    timeline: ScoreTimeline,
    patterns: list[UnitPattern],
    bank: TemplateBank,
    kind: DistortionKind | str = DistortionKind.NOVEL,
    beta: float = 2.0,
    *,
    settings: DistortionSettings | None = None,
    decomposition: DecompositionTable | None = None,
) -> DistortionMatrix:
    """Fill the K x T distortion matrix with the selected measure.

    Args:
        spectrogram: Normalized performance frames
        timeline: Score units
        patterns: One pattern per unit, in timeline order
        bank: Note templates (config must match the frames)
        kind: Registered measure name or DistortionKind
        beta: Beta-divergence parameter (baseline kind)
        settings: Remaining measure options; its beta is replaced by ``beta``
        decomposition: Frame decompositions already computed for these inputs

    Raises:
        ValidationError: On inconsistent inputs or an unknown kind
        ConfigMismatchError: If the bank was built under another config
    """
    from scorealign.analyzers.registry import get_registry

    name = kind.value if isinstance(kind, DistortionKind) else kind
    options = replace(settings or DistortionSettings(), beta=beta)
    measure = get_registry().get(name, options)
    matrix = measure.compute(DistortionInputs(spectrogram, timeline, patterns, bank, decomposition))
    logger.debug("Built %s distortion matrix %dx%d", name, *matrix.shape)
    return matrix
