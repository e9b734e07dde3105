"""End-to-end alignment accuracy on synthetic performances.

Performances are rendered from the same trained patterns used for alignment,
so every error comes from tempo changes, noise and frame quantization.
"""

import numpy as np
import pytest

from scorealign.config import RunConfig, load_config_from_dict
from scorealign.evaluation.metrics import average_reports, evaluate
from scorealign.evaluation.synthesis import synth_performance
from scorealign.models.bank import TemplateBank
from scorealign.models.evaluation import EvalReport, WarpMap
from scorealign.models.patterns import UnitPattern
from scorealign.models.result import AlignmentStatus
from scorealign.models.score import ScoreTimeline
from scorealign.models.spectral import FrontendConfig
from scorealign.pipeline import AlignmentPipeline
from tests.fixtures import SMALL_CONFIG

HOP_SECONDS = SMALL_CONFIG.frame_period
DEFAULT_HOP_SECONDS = FrontendConfig().frame_period


def _config(**distortion: object) -> RunConfig:
    return load_config_from_dict(
        {
            "frontend": SMALL_CONFIG.to_dict(),
            "training": {"iterations": 60},
            "distortion": distortion,
        }
    )


def _align(
    pipeline: AlignmentPipeline,
    timeline: ScoreTimeline,
    bank: TemplateBank,
    patterns: list[UnitPattern],
    warp: WarpMap,
    noise: float = 0.0,
    seed: int = 0,
) -> EvalReport:
    spectrogram, truth = synth_performance(
        timeline, bank, warp, noise, seed, pipeline.config.frontend, patterns=patterns
    )
    result = pipeline.run(timeline, spectrogram, bank, patterns)
    assert result.status is AlignmentStatus.COMPLETED
    return evaluate(result.onsets, truth)


class TestClosure:
    """Noiseless identity-warp performances."""

    @pytest.mark.parametrize("timeline_name", ["progression_timeline", "common_notes_timeline"])
    def test_onsets_within_two_hops(
        self,
        request: pytest.FixtureRequest,
        synthetic_bank: TemplateBank,
        timeline_name: str,
    ) -> None:
        """Test that every unit onset is recovered within two hops."""
        timeline: ScoreTimeline = request.getfixturevalue(timeline_name)
        pipeline = AlignmentPipeline(_config())
        patterns = pipeline.train_patterns(timeline, synthetic_bank)

        report = _align(pipeline, timeline, synthetic_bank, patterns, WarpMap.identity())

        assert len(report.errors) == len(timeline)
        assert max(report.errors.values()) <= 2 * HOP_SECONDS

    def test_default_frontend(self, default_bank: TemplateBank, progression_timeline: ScoreTimeline) -> None:
        """Test closure at 22050 Hz, 4096-point FFT and 256-sample hop with default training."""
        pipeline = AlignmentPipeline(RunConfig())
        patterns = pipeline.train_patterns(progression_timeline, default_bank)

        report = _align(pipeline, progression_timeline, default_bank, patterns, WarpMap.identity())

        assert len(report.errors) == len(progression_timeline)
        assert max(report.errors.values()) <= 2 * DEFAULT_HOP_SECONDS


class TestTempoRobustness:
    """Piecewise tempo changes with spectral noise."""

    def test_fraction_within_tenth_of_a_second(
        self, synthetic_bank: TemplateBank, progression_timeline: ScoreTimeline
    ) -> None:
        """Test that at least 90% of onsets land within 0.10 s across 20 corpora."""
        pipeline = AlignmentPipeline(_config())
        patterns = pipeline.train_patterns(progression_timeline, synthetic_bank)
        reports = []

        for seed in range(20):
            rng = np.random.default_rng(seed)
            warp = WarpMap.from_segments([0.8, 0.9, 0.8], list(rng.uniform(0.7, 1.4, size=3)))
            reports.append(
                _align(
                    pipeline,
                    progression_timeline,
                    synthetic_bank,
                    patterns,
                    warp,
                    noise=0.05,
                    seed=seed,
                )
            )

        summary = average_reports(reports)
        assert summary["cases"] == 20
        assert summary["fractions"]["0.10"] >= 0.90


class TestCommonNotes:
    """Consecutive units sharing notes."""

    @pytest.mark.parametrize("beta", [1.0, 2.0])
    def test_novel_not_worse_than_baseline(
        self,
        synthetic_bank: TemplateBank,
        common_notes_timeline: ScoreTimeline,
        beta: float,
    ) -> None:
        """Test that the subspace distortion is at least as accurate as the divergence baseline."""
        novel = AlignmentPipeline(_config())
        baseline = AlignmentPipeline(_config(kind="baseline", beta=beta))
        patterns = novel.train_patterns(common_notes_timeline, synthetic_bank)
        warps = [WarpMap.from_segments([1.0, 1.5], [1.2, 0.8])]
        for seed in range(5):
            rng = np.random.default_rng(seed)
            warps.append(WarpMap.from_segments([0.8, 0.9, 0.8], list(rng.uniform(0.7, 1.4, size=3))))

        for warp in warps:
            novel_report = _align(novel, common_notes_timeline, synthetic_bank, patterns, warp)
            baseline_report = _align(baseline, common_notes_timeline, synthetic_bank, patterns, warp)

            assert novel_report.mean <= baseline_report.mean + 1e-12
            assert novel_report.max <= 2 * HOP_SECONDS
