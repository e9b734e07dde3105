"""Score-unit pattern training.

Each unit is rendered in the spectral domain from its note templates and the
render is fitted as a per-frame gain times an amplitude-weighted sum of the
templates, with the templates held fixed. Gains and amplitudes are estimated by
alternating multiplicative updates on the beta-divergence, then the weighted
template sum is normalized to unit norm as the unit basis.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

import numpy as np

from scorealign.analyzers.divergence import DIVERGENCE_FLOOR, beta_divergence, check_beta
from scorealign.errors import ConvergenceError, RenderError
from scorealign.models.bank import TemplateBank
from scorealign.models.patterns import TrainingRender, UnitPattern
from scorealign.models.score import NoteKey, ScoreTimeline, ScoreUnit, sorted_keys
from scorealign.models.spectral import FrontendConfig

logger = logging.getLogger(__name__)

EPS = np.spacing(1)

# Relative objective increase tolerated before an update is declared broken
INCREASE_TOLERANCE = 1e-9


def render_unit(
    unit: ScoreUnit,
    bank: TemplateBank,
    duration: float,
    envelope: np.ndarray | None = None,
) -> TrainingRender:
    """Render a unit as frames of summed note templates.

    Args:
        unit: Non-silence score unit
        bank: Template bank
        duration: Render length in seconds
        envelope: Per-frame amplitude; constant 1 when omitted

    Raises:
        RenderError: For silence units, or durations shorter than one frame
        TemplateMissingError: If a note has no template
    """
    if unit.is_silence:
        raise RenderError(f"cannot render silence (unit {unit.index})")
    n_frames = int(np.floor(duration / bank.config.frame_period + 1e-9))
    if n_frames < 1:
        raise RenderError(f"duration too short: {duration}s is less than one frame")

    composite = bank.matrix(sorted_keys(unit.notes)).sum(axis=1)
    if envelope is None:
        gains = np.ones(n_frames)
    else:
        gains = np.asarray(envelope, dtype=np.float64)
        if gains.shape != (n_frames,) or np.any(gains < 0):
            raise RenderError(f"envelope must be {n_frames} nonnegative values")
    return TrainingRender(unit_index=unit.index, spectrogram=np.outer(gains, composite))


def _ratio_power(model: np.ndarray, exponent: float) -> np.ndarray:
    if exponent == 0.0:
        return np.ones_like(model)
    return np.maximum(model, DIVERGENCE_FLOOR) ** exponent


def fit_pattern(
    render: TrainingRender,
    unit: ScoreUnit,
    bank: TemplateBank,
    beta: float = 2.0,
    iters: int = 100,
    tol: float = 1e-5,
) -> UnitPattern:
    """Fit gains and note amplitudes to a unit render.

    The fitted gains are stored on ``render.gains`` (rescaled so max g == 1).

    Args:
        render: Nonnegative render of the unit
        unit: The rendered unit
        bank: Template bank holding every note of the unit
        beta: Beta-divergence parameter
        iters: Maximum number of update rounds
        tol: Stop when the relative objective improvement falls below this

    Raises:
        RenderError: If the render is all zeros
        ConvergenceError: If the objective increases for beta in [1, 2]
    """
    beta = check_beta(beta)
    V = render.spectrogram
    if not np.any(V > 0):
        raise RenderError(f"render of unit {unit.index} is all zeros")

    keys: list[NoteKey] = sorted_keys(unit.notes)
    W = bank.matrix(keys)
    alpha = np.full(len(keys), 1.0 / len(keys))
    g = np.ones(V.shape[0])
    monotone = 1.0 <= beta <= 2.0

    history: list[float] = []
    previous = float(beta_divergence(V, np.outer(g, W @ alpha), beta))
    for iteration in range(1, iters + 1):
        b = W @ alpha
        model = np.outer(g, b)
        g = g * ((V * _ratio_power(model, beta - 2.0)) @ b) / (
            _ratio_power(model, beta - 1.0) @ b + EPS
        )

        model = np.outer(g, b)
        numerator = W.T @ (g @ (V * _ratio_power(model, beta - 2.0)))
        denominator = W.T @ (g @ _ratio_power(model, beta - 1.0))
        alpha = alpha * numerator / (denominator + EPS)

        current = float(beta_divergence(V, np.outer(g, W @ alpha), beta))
        history.append(current)
        if monotone and current > previous * (1.0 + INCREASE_TOLERANCE) + 1e-12:
            raise ConvergenceError(iteration, previous, current)
        if previous <= 0.0 or (previous - current) / previous < tol:
            logger.debug("Unit %d converged after %d iterations", unit.index, iteration)
            break
        previous = current

    peak = float(g.max())
    if peak > 0.0:
        g = g / peak
        alpha = alpha * peak
    render.gains = g

    composite = W @ alpha
    norm = float(np.linalg.norm(composite))
    degenerate = norm <= 0.0 or not np.any(alpha > 0)
    if degenerate:
        logger.warning("Unit %d: render is orthogonal to its note templates", unit.index)
        basis = np.zeros(bank.config.n_bins)
        norm = 0.0
    else:
        basis = composite / norm

    return UnitPattern(
        unit_index=unit.index,
        alphas={key: float(value) for key, value in zip(keys, alpha, strict=True)},
        basis=basis,
        composite_norm=norm,
        degenerate=degenerate,
        objective_history=tuple(history),
    )


def build_all_patterns(
    timeline: ScoreTimeline,
    bank: TemplateBank,
    config: FrontendConfig,
    *,
    beta: float = 2.0,
    iterations: int = 100,
    tolerance: float = 1e-5,
    render_duration: float = 1.0,
    threads: int = 1,
) -> list[UnitPattern]:
    """Train one pattern per unit, in timeline order.

    Units sharing a note set are fitted once; silence units get the empty pattern.

    Raises:
        ConfigMismatchError: If the bank was built under another config
        TemplateMissingError: If a unit note has no template
    """
    bank.require_config(config)
    missing = bank.missing(timeline.all_notes)
    if missing:
        bank.lookup(*missing[0])

    def fit(notes: frozenset[NoteKey]) -> UnitPattern:
        unit = next(u for u in timeline.units if u.notes == notes)
        render = render_unit(unit, bank, render_duration)
        return fit_pattern(render, unit, bank, beta=beta, iters=iterations, tol=tolerance)

    distinct = list(dict.fromkeys(unit.notes for unit in timeline.units if not unit.is_silence))
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        fitted = dict(zip(distinct, pool.map(fit, distinct), strict=True))

    patterns = [
        UnitPattern.silence(unit.index, config.n_bins)
        if unit.is_silence
        else replace(fitted[unit.notes], unit_index=unit.index)
        for unit in timeline.units
    ]
    logger.info(
        "Trained %d patterns (%d distinct note sets, beta=%s)", len(patterns), len(distinct), beta
    )
    return patterns
