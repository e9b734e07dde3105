"""Frame decomposition over the note subspace of consecutive unit pairs.

Every normalized frame is approximated by a weighted sum of the note templates
of units k and k+1 plus a residual. The weights minimize the residual energy,
constrained to be nonnegative unless the unconstrained variant is requested.

The problem is reduced to the n x n Gram system: with G = W^T W = L L^T and
c = W^T x, ||x - W a||^2 = ||L^T a - L^-1 c||^2 + ||x||^2 - ||L^-1 c||^2, so the
active-set solver only ever sees an n x n matrix.
"""

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve, solve_triangular
from scipy.optimize import nnls

from scorealign.analyzers.score_units import unit_union
from scorealign.errors import FrontendError, NNLSError
from scorealign.models.alignment import DecompositionRow, DecompositionTable, FrameDecomposition
from scorealign.models.bank import TemplateBank
from scorealign.models.score import NoteKey, ScoreTimeline, sorted_keys
from scorealign.models.spectral import Spectrogram

logger = logging.getLogger(__name__)

# Active-set iteration budget per note in the subspace
NNLS_ITERATIONS_PER_NOTE = 10

# Above this the Gram reduction loses accuracy and the F x n system is solved instead
MAX_GRAM_CONDITION = 1e8


class SubspaceSolver:
    """Least-squares decomposition over a fixed set of note templates.

    Args:
        templates: F x n matrix whose columns are unit-norm note spectra
        nonnegative: Constrain coefficients to a >= 0
    """

    def __init__(self, templates: np.ndarray, nonnegative: bool = True) -> None:
        self.W = np.asarray(templates, dtype=np.float64)
        self.nonnegative = nonnegative
        self.n_notes = self.W.shape[1]
        self.gram = self.W.T @ self.W
        self._cholesky: tuple[np.ndarray, bool] | None = None
        if self.n_notes and np.linalg.cond(self.gram) < MAX_GRAM_CONDITION:
            try:
                self._cholesky = cho_factor(self.gram, lower=True)
            except LinAlgError:
                self._cholesky = None
        if self.n_notes and self._cholesky is None:
            logger.debug("Ill-conditioned Gram matrix for %d notes; using full system", self.n_notes)

    def _nnls(self, A: np.ndarray, b: np.ndarray) -> np.ndarray:
        budget = NNLS_ITERATIONS_PER_NOTE * self.n_notes
        try:
            solution, _ = nnls(A, b, maxiter=budget)
        except RuntimeError as e:
            raise NNLSError(budget, self.n_notes) from e
        return np.asarray(solution)

    def solve(self, frames: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Decompose every row of a T x F frame array.

        Returns:
            (T x n coefficients, length-T residual energies ||x - W a||^2)
        """
        X = np.atleast_2d(np.asarray(frames, dtype=np.float64))
        energy = np.einsum("tf,tf->t", X, X)
        if self.n_notes == 0:
            return np.zeros((X.shape[0], 0)), energy

        C = X @ self.W
        if self._cholesky is not None:
            coeffs = cho_solve(self._cholesky, C.T).T
        else:
            coeffs = np.linalg.lstsq(self.W, X.T, rcond=None)[0].T

        if self.nonnegative:
            infeasible = np.nonzero(np.any(coeffs < 0, axis=1))[0]
            if infeasible.size:
                coeffs[infeasible] = self._solve_constrained(X[infeasible], C[infeasible])

        residual = energy - 2.0 * np.einsum("tn,tn->t", coeffs, C)
        residual += np.einsum("tn,nm,tm->t", coeffs, self.gram, coeffs)
        return coeffs, np.maximum(residual, 0.0)

    def _solve_constrained(self, X: np.ndarray, C: np.ndarray) -> np.ndarray:
        out = np.empty((X.shape[0], self.n_notes))
        if self._cholesky is not None:
            L = np.tril(self._cholesky[0])
            targets = solve_triangular(L, C.T, lower=True).T
            for row, target in enumerate(targets):
                out[row] = self._nnls(L.T, target)
        else:
            for row, x in enumerate(X):
                out[row] = self._nnls(self.W, x)
        return out


def decompose_frame(
    x: np.ndarray,
    note_set: frozenset[NoteKey] | set[NoteKey],
    bank: TemplateBank,
    *,
    silent: bool = False,
    nonnegative: bool = True,
) -> FrameDecomposition:
    """Decompose one normalized frame over the templates of ``note_set``.

    Args:
        x: Unit-norm frame (or zeros when silent)
        note_set: Notes spanning the subspace
        bank: Template bank
        silent: Frame was flagged silent by normalization
        nonnegative: Constrain coefficients to a >= 0

    Raises:
        TemplateMissingError: If a note has no template
        NNLSError: If the active-set solver exceeds its budget
    """
    keys = sorted_keys(set(note_set))
    W = bank.matrix(keys)
    if silent:
        return FrameDecomposition(coeffs={}, residual_norm_sq=0.0)
    vector = np.asarray(x, dtype=np.float64)
    if not keys:
        return FrameDecomposition(coeffs={}, residual_norm_sq=float(np.dot(vector, vector)))
    coeffs, residual = SubspaceSolver(W, nonnegative=nonnegative).solve(vector[None, :])
    return FrameDecomposition(
        coeffs={key: float(value) for key, value in zip(keys, coeffs[0], strict=True)},
        residual_norm_sq=float(residual[0]),
    )


def decompose_all(
    spectrogram: Spectrogram,
    timeline: ScoreTimeline,
    bank: TemplateBank,
    *,
    nonnegative: bool = True,
    threads: int = 1,
) -> DecompositionTable:
    """Decompose every frame over every consecutive-unit pair.

    Entry (k, t) uses the notes of unit_union(timeline, k). Silent frames get
    zero coefficients and zero residual.

    Raises:
        FrontendError: If the spectrogram is not normalized
        ConfigMismatchError: If the bank was built under another config
    """
    if not spectrogram.normalized:
        raise FrontendError("decomposition needs a normalized spectrogram")
    bank.require_config(spectrogram.config)

    unions = [unit_union(timeline, k) for k in range(len(timeline))]
    solvers: dict[frozenset[NoteKey], SubspaceSolver] = {}
    for union in unions:
        if union not in solvers:
            solvers[union] = SubspaceSolver(bank.matrix(sorted_keys(set(union))), nonnegative)

    active = ~spectrogram.silent
    frames = spectrogram.frames[active]
    n_frames = spectrogram.n_frames

    def solve_union(union: frozenset[NoteKey]) -> DecompositionRow:
        keys = sorted_keys(set(union))
        coeffs = np.zeros((n_frames, len(keys)))
        residual = np.zeros(n_frames)
        coeffs[active], residual[active] = solvers[union].solve(frames)
        return DecompositionRow(keys=keys, coeffs=coeffs, residual_norm_sq=residual)

    distinct = list(solvers)
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        solved = dict(zip(distinct, pool.map(solve_union, distinct), strict=True))

    logger.debug(
        "Decomposed %d frames over %d unit pairs (%d distinct subspaces)",
        n_frames,
        len(unions),
        len(distinct),
    )
    return DecompositionTable(rows=[solved[union] for union in unions], silent=spectrogram.silent.copy())
