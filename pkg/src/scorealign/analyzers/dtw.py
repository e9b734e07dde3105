"""Offline DTW over a distortion matrix.

Every frame is assigned to exactly one unit. Between consecutive frames the
path either stays on its unit, advances one unit, or (when enabled) skips one
unit. Ties prefer stay, then advance, then skip.
"""

import logging
import math

import numpy as np

from scorealign.errors import AlignmentError, ValidationError
from scorealign.models.alignment import AlignmentPath, DistortionMatrix
from scorealign.models.spectral import FrontendConfig

logger = logging.getLogger(__name__)

STAY, ADVANCE, SKIP = 0, 1, 2


def minimum_path_length(n_units: int, allow_skip: bool) -> int:
    """Fewest frames that can visit unit 0 first and unit K-1 last."""
    if allow_skip:
        return math.ceil((n_units - 1) / 2) + 1
    return n_units


def band_mask(n_units: int, n_frames: int, band: int | None) -> np.ndarray:
    """K x T mask of cells within ``band`` frames of the straight diagonal.

    The diagonal runs through t_diag(k) = k * (T - 1) / (K - 1). A single unit
    owns the whole row, so its mask is all True.
    """
    if band is not None and band < 1:
        raise ValidationError(f"dtw band must be >= 1 frame (got {band})")
    if band is None or n_units == 1:
        return np.ones((n_units, n_frames), dtype=bool)
    diagonal = np.arange(n_units) * (n_frames - 1) / max(n_units - 1, 1)
    return np.abs(np.arange(n_frames)[None, :] - diagonal[:, None]) <= band


def dtw(matrix: DistortionMatrix, allow_skip: bool = False, band: int | None = None) -> AlignmentPath:
    """Minimum-cost path from (0, 0) to (K-1, T-1).

    C(k, t) = D(k, t) + min(C(k, t-1), C(k-1, t-1), [C(k-2, t-1)]) with C(0, 0) = D(0, 0).

    Args:
        matrix: K x T distortion matrix
        allow_skip: Permit advancing two units in one frame
        band: Sakoe-Chiba half-width in frames; None disables the constraint

    Raises:
        AlignmentError: If T is below the minimum path length, or the band excludes every path
    """
    D = matrix.values
    n_units, n_frames = matrix.shape
    if n_units < 1:
        raise AlignmentError("distortion matrix has no score units")
    if n_frames < minimum_path_length(n_units, allow_skip):
        raise AlignmentError(
            f"performance shorter than score path ({n_frames} frames for {n_units} units)"
        )

    allowed = band_mask(n_units, n_frames, band)
    steps = (STAY, ADVANCE, SKIP) if allow_skip else (STAY, ADVANCE)

    cost = np.full((n_units, n_frames), np.inf)
    pointer = np.zeros((n_units, n_frames), dtype=np.int8)
    cost[0, 0] = D[0, 0]
    candidates = np.full((len(steps), n_units), np.inf)
    for t in range(1, n_frames):
        previous = cost[:, t - 1]
        for row, step in enumerate(steps):
            candidates[row, step:] = previous[: n_units - step]
        choice = np.argmin(candidates, axis=0)
        best = candidates[choice, np.arange(n_units)]
        column = np.where(allowed[:, t], D[:, t] + best, np.inf)
        cost[:, t] = column
        pointer[:, t] = choice

    total = cost[n_units - 1, n_frames - 1]
    if not np.isfinite(total):
        raise AlignmentError(f"no alignment path fits within a band of {band} frames")

    path = [(n_units - 1, n_frames - 1)]
    k = n_units - 1
    for t in range(n_frames - 1, 0, -1):
        k -= int(steps[pointer[k, t]])
        path.append((k, t - 1))
    path.reverse()

    onset_frames = _first_frames(path, n_units)
    onset_times = (
        {k: float(matrix.config.frame_time(t)) for k, t in onset_frames.items()}
        if matrix.config is not None
        else {}
    )
    logger.debug("DTW path over %dx%d matrix, cost %.6g", n_units, n_frames, total)
    return AlignmentPath(
        steps=path,
        onset_frames=onset_frames,
        total_cost=float(total),
        onset_times=onset_times,
    )


def _first_frames(steps: list[tuple[int, int]], n_units: int) -> dict[int, int]:
    first: dict[int, int] = {}
    previous_k = -1
    for k, t in steps:
        # Skipped units take the frame where the skip happened
        for unit in range(previous_k + 1, k + 1):
            first.setdefault(unit, t)
        previous_k = max(previous_k, k)
    return {unit: first[unit] for unit in range(n_units) if unit in first}


def extract_onsets(path: AlignmentPath, config: FrontendConfig) -> dict[int, float]:
    """Onset in seconds of every unit: the centre time of its first frame.

    onset(k) = t_first * hop / sr + fft / (2 * sr)
    """
    n_units = max(k for k, _ in path.steps) + 1 if path.steps else 0
    frames = _first_frames(path.steps, n_units)
    return {k: float(config.frame_time(t)) for k, t in frames.items()}
