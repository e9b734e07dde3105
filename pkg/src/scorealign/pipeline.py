"""Alignment pipeline orchestrator.

Runs the alignment stages in order and collects their outputs:
1. Frontend: normalize performance frames
2. Patterns: train one pattern per score unit (unless supplied)
3. Distortion: fill the K x T matrix with the configured measure
4. DTW: find the minimum-cost path and unit onsets
"""

import logging
from dataclasses import dataclass
from pathlib import Path

from scorealign.analyzers.decomposition import decompose_all
from scorealign.analyzers.distortion import build_matrix
from scorealign.analyzers.dtw import dtw
from scorealign.analyzers.frontend import normalize_spectrogram
from scorealign.analyzers.pattern_training import build_all_patterns
from scorealign.analyzers.score_units import build_timeline, load_score
from scorealign.config import RunConfig
from scorealign.errors import ScoreAlignError
from scorealign.evaluation.metrics import evaluate
from scorealign.evaluation.synthesis import synth_performance
from scorealign.models.alignment import DecompositionTable, DistortionMatrix
from scorealign.models.bank import TemplateBank
from scorealign.models.evaluation import CorpusCase, EvalReport
from scorealign.models.patterns import UnitPattern
from scorealign.models.result import AlignmentResult, AlignmentStatus, PipelineIssue
from scorealign.models.score import ScoreTimeline
from scorealign.models.spectral import Spectrogram
from scorealign.utils.logging import log_stage

logger = logging.getLogger(__name__)

# Warn when more than this share of frames is silent
SILENT_FRAME_WARNING = 0.5


@dataclass
class PipelineOptions:
    """Options for controlling pipeline execution.

    Attributes:
        keep_decomposition: Also store the frame decomposition table (for CSV export)
        fail_fast: Re-raise the first fatal error instead of recording it
    """

    keep_decomposition: bool = False
    fail_fast: bool = False


@dataclass
class CaseOutcome:
    """Result of one synthetic corpus case.

    Attributes:
        case: The case
        result: Alignment run
        truth: Ground-truth onsets
        report: Onset accuracy (None if the alignment failed)
    """

    case: CorpusCase
    result: AlignmentResult
    truth: dict[int, float]
    report: EvalReport | None


class AlignmentPipeline:
    """Orchestrates pattern training, distortion and DTW for one performance."""

    def __init__(self, config: RunConfig | None = None) -> None:
        """Initialize the alignment pipeline.

        Args:
            config: Run configuration (uses defaults if None)
        """
        self.config = config or RunConfig()

    def train_patterns(self, timeline: ScoreTimeline, bank: TemplateBank) -> list[UnitPattern]:
        """Train one pattern per unit with the configured training options."""
        training = self.config.training
        return build_all_patterns(
            timeline,
            bank,
            self.config.frontend,
            beta=training.beta,
            iterations=training.iterations,
            tolerance=training.tolerance,
            render_duration=training.render_duration_s,
            threads=self.config.runtime.threads,
        )

    def run(
        self,
        timeline: ScoreTimeline,
        spectrogram: Spectrogram,
        bank: TemplateBank,
        patterns: list[UnitPattern] | None = None,
        options: PipelineOptions | None = None,
    ) -> AlignmentResult:
        """Align a performance to a score.

        Args:
            timeline: Score units
            spectrogram: Performance frames (normalized here if needed)
            bank: Note templates
            patterns: Pre-trained unit patterns; trained when None
            options: Pipeline execution options

        Returns:
            AlignmentResult; check ``status`` or call ``raise_for_status()``
        """
        options = options or PipelineOptions()
        result = AlignmentResult(status=AlignmentStatus.RUNNING, timeline=timeline)
        logger.info("Aligning %d frames to %d score units", spectrogram.n_frames, len(timeline))

        try:
            frames = self._run_frontend(spectrogram, result)
            result.patterns = self._run_patterns(timeline, bank, patterns, result)
            if options.keep_decomposition:
                result.decomposition = decompose_all(
                    frames,
                    timeline,
                    bank,
                    nonnegative=self.config.decomposition.nonnegative,
                    threads=self.config.runtime.threads,
                )
            result.matrix = self._run_distortion(
                frames, timeline, result.patterns, bank, result, decomposition=result.decomposition
            )
            self._run_dtw(result.matrix, result)
            result.status = AlignmentStatus.COMPLETED
        except ScoreAlignError as e:
            logger.error("Pipeline failed: %s", e)
            result.status = AlignmentStatus.FAILED
            result.add_issue(PipelineIssue(stage="pipeline", message=str(e), recoverable=False, error=e))
            if options.fail_fast:
                raise

        logger.info("Alignment %s (%d issues)", result.status.value, len(result.issues))
        return result

    def run_matrix(self, matrix: DistortionMatrix) -> AlignmentResult:
        """Re-run DTW on a stored distortion matrix."""
        result = AlignmentResult(status=AlignmentStatus.RUNNING, matrix=matrix)
        try:
            self._run_dtw(matrix, result)
            result.status = AlignmentStatus.COMPLETED
        except ScoreAlignError as e:
            result.status = AlignmentStatus.FAILED
            result.add_issue(PipelineIssue(stage="dtw", message=str(e), recoverable=False, error=e))
        return result

    def run_case(
        self,
        case: CorpusCase,
        bank: TemplateBank,
        options: PipelineOptions | None = None,
    ) -> CaseOutcome:
        """Synthesize one corpus case, align it and score the onsets.

        The performance is rendered with the same trained patterns used for alignment.

        Raises:
            ScoreAlignError: If the score cannot be loaded or synthesized
        """
        timeline = build_timeline(load_score(Path(case.score)))
        patterns = self.train_patterns(timeline, bank)
        spectrogram, truth = synth_performance(
            timeline,
            bank,
            case.warp,
            case.noise,
            case.seed,
            self.config.frontend,
            patterns=patterns,
        )
        result = self.run(timeline, spectrogram, bank, patterns=patterns, options=options)
        report = evaluate(result.onsets, truth) if result.status is AlignmentStatus.COMPLETED else None
        if report is not None:
            logger.info(
                "Case %s: mean error %.4fs, %.0f%% within 0.10s",
                case.name,
                report.mean,
                100 * report.fractions.get(0.10, 0.0),
            )
        return CaseOutcome(case=case, result=result, truth=truth, report=report)

    def _run_frontend(self, spectrogram: Spectrogram, result: AlignmentResult) -> Spectrogram:
        with log_stage(logger, "frontend", frames=spectrogram.n_frames) as stage:
            frames = spectrogram if spectrogram.normalized else normalize_spectrogram(spectrogram)
            silent = int(frames.silent.sum())
            stage["silent_frames"] = silent
        result.timings["frontend"] = stage["elapsed_s"]
        if frames.n_frames and silent / frames.n_frames > SILENT_FRAME_WARNING:
            message = f"{silent} of {frames.n_frames} frames are silent"
            logger.warning(message)
            result.add_issue(PipelineIssue(stage="frontend", message=message))
        return frames

    def _run_patterns(
        self,
        timeline: ScoreTimeline,
        bank: TemplateBank,
        patterns: list[UnitPattern] | None,
        result: AlignmentResult,
    ) -> list[UnitPattern]:
        with log_stage(logger, "patterns", units=len(timeline)) as stage:
            if patterns is None:
                patterns = self.train_patterns(timeline, bank)
                stage["trained"] = True
        result.timings["patterns"] = stage["elapsed_s"]
        for pattern in patterns:
            if pattern.degenerate:
                result.add_issue(
                    PipelineIssue(
                        stage="patterns",
                        message=f"unit {pattern.unit_index} has a degenerate pattern",
                    )
                )
        return patterns

    def _run_distortion(
        self,
        frames: Spectrogram,
        timeline: ScoreTimeline,
        patterns: list[UnitPattern],
        bank: TemplateBank,
        result: AlignmentResult,
        decomposition: DecompositionTable | None = None,
    ) -> DistortionMatrix:
        distortion = self.config.distortion
        with log_stage(logger, "distortion", kind=distortion.kind) as stage:
            matrix = build_matrix(
                frames,
                timeline,
                patterns,
                bank,
                kind=distortion.kind,
                beta=distortion.beta,
                settings=self.config.distortion_settings(),
                decomposition=decomposition,
            )
            stage["shape"] = list(matrix.shape)
        result.timings["distortion"] = stage["elapsed_s"]
        return matrix

    def _run_dtw(self, matrix: DistortionMatrix, result: AlignmentResult) -> None:
        dtw_config = self.config.dtw
        if matrix.config is None:
            matrix.config = self.config.frontend
        with log_stage(logger, "dtw", allow_skip=dtw_config.allow_skip) as stage:
            path = dtw(matrix, allow_skip=dtw_config.allow_skip, band=dtw_config.band)
            stage["total_cost"] = path.total_cost
        result.timings["dtw"] = stage["elapsed_s"]
        result.path = path
        result.onsets = dict(path.onset_times)

        visited = {k for k, _ in path.steps}
        skipped = [k for k in range(matrix.shape[0]) if k not in visited]
        if skipped:
            result.add_issue(PipelineIssue(stage="dtw", message=f"units skipped by the path: {skipped}"))
