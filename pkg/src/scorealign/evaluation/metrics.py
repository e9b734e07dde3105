"""Onset accuracy metrics."""

import numpy as np

from scorealign.errors import EvaluationError
from scorealign.models.evaluation import DEFAULT_THRESHOLDS, EvalReport


def evaluate(
    estimated: dict[int, float],
    truth: dict[int, float],
    thresholds: tuple[float, ...] = DEFAULT_THRESHOLDS,
) -> EvalReport:
    """Score estimated unit onsets against ground truth.

    Raises:
        EvaluationError: If the unit sets differ or are empty
    """
    if not truth and not estimated:
        raise EvaluationError("no units to evaluate")
    if set(estimated) != set(truth):
        only_est = sorted(set(estimated) - set(truth))
        only_truth = sorted(set(truth) - set(estimated))
        raise EvaluationError(
            f"unit sets differ (only estimated: {only_est}, only ground truth: {only_truth})"
        )

    units = sorted(truth)
    errors = np.abs(np.array([estimated[k] - truth[k] for k in units], dtype=np.float64))
    return EvalReport(
        errors={k: float(e) for k, e in zip(units, errors, strict=True)},
        mean=float(errors.mean()),
        median=float(np.median(errors)),
        max=float(errors.max()),
        fractions={float(th): float(np.mean(errors <= th)) for th in thresholds},
    )


def average_reports(reports: list[EvalReport]) -> dict[str, float | dict[str, float]]:
    """Corpus-level aggregate: means of the per-case statistics.

    Raises:
        EvaluationError: If no reports are given
    """
    if not reports:
        raise EvaluationError("no reports to average")
    thresholds = sorted(reports[0].fractions)
    return {
        "cases": len(reports),
        "mean_error_s": float(np.mean([r.mean for r in reports])),
        "median_error_s": float(np.mean([r.median for r in reports])),
        "max_error_s": float(max(r.max for r in reports)),
        "fractions": {
            f"{th:.2f}": float(np.mean([r.fractions.get(th, 0.0) for r in reports]))
            for th in thresholds
        },
    }
