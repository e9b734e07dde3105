"""Elementwise beta-divergence d_beta(p | q), summed.

beta = 2 is half the squared Euclidean distance, beta = 1 the generalized
Kullback-Leibler divergence. Itakura-Saito (beta = 0) is not supported.
"""

import numpy as np

from scorealign.errors import ValidationError

# Entries are floored here wherever a logarithm or negative power needs it
DIVERGENCE_FLOOR = 1e-10


def check_beta(beta: float) -> float:
    """Validate a beta parameter and return it as float."""
    beta = float(beta)
    if not np.isfinite(beta):
        raise ValidationError(f"beta must be finite (got {beta})")
    if beta == 0.0:
        raise ValidationError("beta = 0 (Itakura-Saito) is not supported")
    return beta


def beta_divergence(p: np.ndarray, q: np.ndarray, beta: float, axis: int | None = None) -> np.ndarray:
    """Sum of d_beta(p | q) over ``axis`` (all entries when None).

    Args:
        p: Nonnegative array (the pattern or data side)
        q: Nonnegative array broadcastable against p (the compared side)
        beta: Divergence parameter, beta != 0
        axis: Reduction axis
    """
    beta = check_beta(beta)
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)

    if beta == 2.0:
        return 0.5 * np.sum((p - q) ** 2, axis=axis)
    if beta == 1.0:
        # 0 * log(0 / q) contributes 0 because the factor p is exactly zero
        pf = np.maximum(p, DIVERGENCE_FLOOR)
        qf = np.maximum(q, DIVERGENCE_FLOOR)
        return np.sum(p * np.log(pf / qf) - p + q, axis=axis)

    if beta < 1.0:
        p = np.maximum(p, DIVERGENCE_FLOOR)
        q = np.maximum(q, DIVERGENCE_FLOOR)
    terms = p**beta + (beta - 1.0) * q**beta - beta * p * q ** (beta - 1.0)
    return np.sum(terms, axis=axis) / (beta * (beta - 1.0))
