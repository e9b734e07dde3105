"""Spectral-domain synthesis of tempo-warped performances.

Frames are built directly from note templates, so the ground truth is exact.
Frame t carries the unit active at score time warp^-1(centre_t).
"""

import logging

import numpy as np

from scorealign.errors import ValidationError
from scorealign.models.bank import TemplateBank
from scorealign.models.evaluation import WarpMap
from scorealign.models.patterns import UnitPattern
from scorealign.models.score import ScoreTimeline, ScoreUnit, sorted_keys
from scorealign.models.spectral import FrontendConfig, Spectrogram

logger = logging.getLogger(__name__)


def _unit_spectrum(unit: ScoreUnit, bank: TemplateBank, pattern: UnitPattern | None) -> np.ndarray:
    if unit.is_silence:
        return np.zeros(bank.config.n_bins)
    keys = sorted_keys(unit.notes)
    if pattern is None:
        alpha = np.ones(len(keys))
    else:
        alpha = np.array([pattern.alphas[key] for key in keys], dtype=np.float64)
    return bank.matrix(keys) @ alpha


def synth_performance(
    timeline: ScoreTimeline,
    bank: TemplateBank,
    warp: WarpMap,
    noise_level: float,
    seed: int,
    config: FrontendConfig,
    patterns: list[UnitPattern] | None = None,
) -> tuple[Spectrogram, dict[int, float]]:
    """Render a warped performance and its ground-truth unit onsets.

    Args:
        timeline: Score units
        bank: Templates for every note of the score
        warp: Score-time to performance-time map
        noise_level: Relative uniform noise amplitude sigma (times the frame max)
        seed: Noise seed
        config: Frontend config (must match the bank)
        patterns: Unit amplitudes; every note uses alpha = 1 when omitted

    Returns:
        (raw spectrogram, onset seconds per unit on the frame-centre clock)

    Raises:
        ValidationError: For negative noise or patterns that do not match the units
        ConfigMismatchError: If the bank was built under another config
    """
    if not np.isfinite(noise_level) or noise_level < 0:
        raise ValidationError(f"noise level must be >= 0 (got {noise_level})")
    bank.require_config(config)
    if patterns is not None and len(patterns) != len(timeline):
        raise ValidationError(f"{len(patterns)} patterns for {len(timeline)} score units")

    spectra = np.vstack(
        [
            _unit_spectrum(unit, bank, patterns[unit.index] if patterns is not None else None)
            for unit in timeline.units
        ]
    )

    duration = float(warp(timeline.total_duration))
    n_frames = max(1, round(duration / config.frame_period))
    centres = np.asarray(config.frame_time(np.arange(n_frames)), dtype=np.float64)
    score_times = np.atleast_1d(warp.inverse(centres))
    active = np.array([timeline.unit_at(float(s)).index for s in score_times], dtype=np.int64)
    frames = spectra[active]

    if noise_level > 0:
        rng = np.random.default_rng(seed)
        peaks = frames.max(axis=1, keepdims=True)
        frames = frames + rng.uniform(0.0, 1.0, size=frames.shape) * noise_level * peaks

    first_centre = float(config.frame_time(0))
    truth = {
        unit.index: max(float(warp(unit.span_start)), first_centre) for unit in timeline.units
    }
    logger.debug(
        "Synthesized %d frames for %d units (noise=%s, seed=%d)",
        n_frames,
        len(timeline),
        noise_level,
        seed,
    )
    return Spectrogram(frames=frames, config=config), truth
