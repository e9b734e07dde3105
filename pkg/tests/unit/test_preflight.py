"""Unit tests for preflight validation of alignment inputs."""

from pathlib import Path

import numpy as np
import pytest
import soundfile as sf

from scorealign.errors import ValidationError
from scorealign.models.patterns import UnitPattern
from scorealign.utils.preflight import InputCheck, PreflightChecker, PreflightResult
from tests.fixtures import SMALL_CONFIG, TINY_CONFIG, chord_score, one_hot_bank, write_score


class TestPreflightResult:
    """Tests for collecting check results."""

    def test_required_failure(self) -> None:
        """Test that a failed required check fails the result."""
        result = PreflightResult()

        result.add_check(InputCheck(name="score", passed=False, message="empty score"))

        assert not result.success
        assert result.errors == ["score: empty score"]

    def test_optional_failure_is_warning(self) -> None:
        """Test that a failed optional check only warns."""
        result = PreflightResult()

        result.add_check(InputCheck(name="audio", passed=False, required=False, message="odd"))

        assert result.success
        assert result.warnings == ["audio: odd"]

    def test_raise_lists_every_error(self) -> None:
        """Test that one exception carries all failures."""
        result = PreflightResult()
        result.add_check(InputCheck(name="score", passed=False, message="a"))
        result.add_check(InputCheck(name="bank_config", passed=False, message="b"))

        with pytest.raises(ValidationError, match="preflight failed") as excinfo:
            result.raise_on_failure()

        assert "score: a" in str(excinfo.value)
        assert "bank_config: b" in str(excinfo.value)

    def test_to_dict(self) -> None:
        """Test dictionary conversion."""
        result = PreflightResult()
        result.add_check(InputCheck(name="score", passed=True, message="3 units"))

        data = result.to_dict()

        assert data["success"] is True
        assert data["checks"][0]["message"] == "3 units"


class TestPreflightChecker:
    """Tests for the input checks of an alignment run."""

    def test_all_checks_pass(self, tmp_path: Path) -> None:
        """Test a consistent score, bank and pattern set."""
        score = write_score(tmp_path / "score.json", chord_score([[60], [62]]))
        bank = one_hot_bank([60, 62])
        patterns = [
            UnitPattern(0, {(60, "piano"): 1.0}, np.zeros(TINY_CONFIG.n_bins)),
            UnitPattern(1, {(62, "piano"): 1.0}, np.zeros(TINY_CONFIG.n_bins)),
        ]

        result = PreflightChecker(TINY_CONFIG).run(score, bank, patterns)

        assert result.success
        assert result.timeline is not None and len(result.timeline) == 2
        assert [check.name for check in result.checks] == [
            "score",
            "bank_config",
            "bank_coverage",
            "patterns",
        ]

    def test_failures_reported_together(self, tmp_path: Path) -> None:
        """Test that config mismatch and missing templates are both reported."""
        score = write_score(tmp_path / "score.json", chord_score([[60], [64]]))

        result = PreflightChecker(SMALL_CONFIG).run(score, one_hot_bank([60]))

        assert not result.success
        assert len(result.errors) == 2
        assert "template missing: (64, 'piano')" in result.errors[1]

    def test_unparseable_score(self, tmp_path: Path) -> None:
        """Test that a broken score fails without further coverage checks."""
        score = tmp_path / "score.json"
        score.write_text("{not json")

        result = PreflightChecker(TINY_CONFIG).run(score, one_hot_bank([60]))

        assert not result.success
        assert result.timeline is None
        assert [check.name for check in result.checks] == ["score", "bank_config"]

    def test_missing_score_file(self, tmp_path: Path) -> None:
        """Test that an absent score is a failed check, not a crash."""
        result = PreflightChecker(TINY_CONFIG).run(tmp_path / "absent.json", one_hot_bank([60]))

        assert not result.success
        assert result.errors[0].startswith("score:")

    def test_pattern_count(self, tmp_path: Path) -> None:
        """Test that patterns must cover every unit."""
        score = write_score(tmp_path / "score.json", chord_score([[60], [62]]))
        patterns = [UnitPattern(0, {(60, "piano"): 1.0}, np.zeros(TINY_CONFIG.n_bins))]

        result = PreflightChecker(TINY_CONFIG).run(score, one_hot_bank([60, 62]), patterns)

        assert result.errors == ["patterns: 1 patterns for 2 score units"]

    def test_pattern_note_sets(self, tmp_path: Path) -> None:
        """Test that pattern note sets must match the units."""
        score = write_score(tmp_path / "score.json", chord_score([[60], [62]]))
        patterns = [
            UnitPattern(0, {(60, "piano"): 1.0}, np.zeros(TINY_CONFIG.n_bins)),
            UnitPattern(1, {(60, "piano"): 1.0}, np.zeros(TINY_CONFIG.n_bins)),
        ]

        result = PreflightChecker(TINY_CONFIG).run(score, one_hot_bank([60, 62]), patterns)

        assert result.errors == ["patterns: note sets differ for units [1]"]

    def test_audio_sample_rate(self, tmp_path: Path) -> None:
        """Test that audio must have the configured sample rate."""
        score = write_score(tmp_path / "score.json", chord_score([[60]]))
        good = tmp_path / "good.wav"
        bad = tmp_path / "bad.wav"
        sf.write(str(good), np.zeros(2000), SMALL_CONFIG.sample_rate, subtype="PCM_16")
        sf.write(str(bad), np.zeros(2000), 16000, subtype="PCM_16")
        bank = one_hot_bank([60], config=SMALL_CONFIG)
        checker = PreflightChecker(SMALL_CONFIG)

        assert checker.run(score, bank, audio=good).success
        result = checker.run(score, bank, audio=bad)

        assert not result.success
        assert "16000 Hz" in result.errors[0]

    def test_missing_audio(self, tmp_path: Path) -> None:
        """Test that an unreadable WAV is a failed check."""
        score = write_score(tmp_path / "score.json", chord_score([[60]]))

        result = PreflightChecker(SMALL_CONFIG).run(
            score, one_hot_bank([60], config=SMALL_CONFIG), audio=tmp_path / "absent.wav"
        )

        assert not result.success
        assert result.errors[0].startswith("audio:")
