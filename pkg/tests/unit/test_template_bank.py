"""Unit tests for note templates and the template bank."""

from pathlib import Path

import numpy as np
import pytest
import soundfile as sf

from scorealign.analyzers.frontend import normalize_frame, stft_magnitude
from scorealign.analyzers.template_bank import (
    build_bank_from_directory,
    build_synthetic_bank,
    learn_template,
    midi_to_hz,
    parse_pitch_range,
    synth_template,
)
from scorealign.errors import (
    ConfigMismatchError,
    SilentRecordingError,
    TemplateMissingError,
    ValidationError,
)
from scorealign.models.bank import InstrumentProfile, NoteTemplate, TemplateBank
from scorealign.models.spectral import FrontendConfig
from tests.fixtures import SMALL_CONFIG, TINY_CONFIG, one_hot_bank


def _tone(pitch: int, seconds: float, config: FrontendConfig, partials: int = 4) -> np.ndarray:
    t = np.arange(int(seconds * config.sample_rate)) / config.sample_rate
    f0 = midi_to_hz(pitch)
    return sum(np.sin(2 * np.pi * h * f0 * t) / h for h in range(1, partials + 1))


class TestLearnTemplate:
    """Tests for templates learned from isolated-note recordings."""

    def test_stationary_tone(self, small_config: FrontendConfig) -> None:
        """Test that a stationary tone's template equals any normalized frame."""
        bin_hz = small_config.bin_hz
        t = np.arange(4000) / small_config.sample_rate
        recording = np.sin(2 * np.pi * 30 * bin_hz * t) + 0.5 * np.sin(2 * np.pi * 60 * bin_hz * t)

        template = learn_template(recording, 60, "piano", small_config)

        frame, _ = normalize_frame(stft_magnitude(recording, small_config).frames[3])
        np.testing.assert_allclose(template.spectrum, frame, atol=1e-6)

    def test_gain_invariance(self, small_config: FrontendConfig) -> None:
        """Test that halving the recording gives the same template."""
        recording = _tone(60, 0.5, small_config)

        full = learn_template(recording, 60, "piano", small_config)
        half = learn_template(0.5 * recording, 60, "piano", small_config)

        np.testing.assert_allclose(half.spectrum, full.spectrum, atol=1e-6)

    def test_quiet_tail_excluded(self, small_config: FrontendConfig) -> None:
        """Test that frames under the 10% energy gate do not contribute."""
        tone = _tone(60, 0.5, small_config)
        quiet = 0.01 * _tone(66, 0.5, small_config, partials=1)

        template = learn_template(np.concatenate([tone, quiet]), 60, "piano", small_config)

        quiet_bin = round(midi_to_hz(66) / small_config.bin_hz)
        assert template.spectrum[quiet_bin] < 0.05 * template.spectrum.max()

    def test_silent_recording(self, small_config: FrontendConfig) -> None:
        """Test that digital silence is rejected."""
        with pytest.raises(SilentRecordingError, match="silent recording"):
            learn_template(np.zeros(2000), 60, "piano", small_config)


class TestSynthTemplate:
    """Tests for synthetic harmonic templates."""

    def test_single_partial(self) -> None:
        """Test that A4 with one partial peaks at the 440 Hz bin."""
        config = FrontendConfig()
        template = synth_template(69, "piano", InstrumentProfile(decay=1.0, partials=1), config)

        assert np.argmax(template.spectrum) == round(440.0 / config.bin_hz)
        assert np.linalg.norm(template.spectrum) == pytest.approx(1.0, abs=1e-9)

    def test_partial_peaks(self) -> None:
        """Test that each partial peaks at round(h * f0 / bin_hz)."""
        config = FrontendConfig()
        f0 = midi_to_hz(57)
        template = synth_template(57, "piano", InstrumentProfile(decay=1.0, partials=5), config)

        for h in range(1, 6):
            centre = round(h * f0 / config.bin_hz)
            window = template.spectrum[centre - 3 : centre + 4]
            assert centre - 3 + int(np.argmax(window)) == centre

    def test_decay(self) -> None:
        """Test that partial peak h is about h**-decay of the first."""
        config = FrontendConfig()
        f0 = midi_to_hz(45)
        template = synth_template(45, "piano", InstrumentProfile(decay=2.0, partials=3), config)

        first = template.spectrum[round(f0 / config.bin_hz)]
        third = template.spectrum[round(3 * f0 / config.bin_hz)]
        assert third / first == pytest.approx(1 / 9, rel=0.1)

    def test_partials_clipped_below_nyquist(self, small_config: FrontendConfig) -> None:
        """Test that no energy lands above Nyquist for high pitches."""
        template = synth_template(100, "piano", InstrumentProfile(partials=20), small_config)

        assert np.linalg.norm(template.spectrum) == pytest.approx(1.0, abs=1e-9)
        assert np.all(np.isfinite(template.spectrum))

    def test_f0_at_nyquist_rejected(self) -> None:
        """Test that f0 at or above Nyquist is an error."""
        config = FrontendConfig(sample_rate=1000, fft_size=64, hop_size=32)

        with pytest.raises(ValidationError, match="Nyquist"):
            synth_template(108, "piano", InstrumentProfile(), config)

    def test_every_template_unit_norm(self, synthetic_bank: TemplateBank) -> None:
        """Test the stored-template invariants."""
        for template in synthetic_bank:
            assert np.all(template.spectrum >= 0)
            assert np.linalg.norm(template.spectrum) == pytest.approx(1.0, abs=1e-9)


class TestTemplateBank:
    """Tests for bank lookup and construction."""

    def test_lookup_present(self) -> None:
        """Test exact-key lookup."""
        bank = one_hot_bank([60, 64])

        assert bank.lookup(64, "piano").spectrum[1] == 1.0

    def test_lookup_missing(self) -> None:
        """Test that an absent key names the pair."""
        bank = one_hot_bank([64])

        with pytest.raises(TemplateMissingError, match=r"template missing: \(60, piano\)"):
            bank.lookup(60, "piano")

    def test_lookup_config_mismatch(self) -> None:
        """Test that a lookup under another config is rejected."""
        bank = one_hot_bank([60])

        with pytest.raises(ConfigMismatchError):
            bank.lookup(60, "piano", config=SMALL_CONFIG)

    def test_matrix_columns(self) -> None:
        """Test that matrix stacks spectra as columns in key order."""
        bank = one_hot_bank([60, 64, 67])

        matrix = bank.matrix([(67, "piano"), (60, "piano")])

        assert matrix.shape == (TINY_CONFIG.n_bins, 2)
        assert matrix[2, 0] == 1.0 and matrix[0, 1] == 1.0

    def test_missing(self) -> None:
        """Test listing keys without templates."""
        bank = one_hot_bank([60])

        assert bank.missing([(60, "piano"), (62, "flute"), (61, "piano")]) == [
            (61, "piano"),
            (62, "flute"),
        ]

    def test_duplicate_rejected(self) -> None:
        """Test that two templates for one key are rejected."""
        template = one_hot_bank([60]).lookup(60, "piano")

        with pytest.raises(ValidationError, match="duplicate"):
            TemplateBank.from_templates([template, template], TINY_CONFIG)

    def test_non_unit_norm_rejected(self) -> None:
        """Test that stored templates must have unit norm."""
        with pytest.raises(ValidationError):
            NoteTemplate(pitch=60, instrument="piano", spectrum=np.full(9, 0.5))

    def test_dict_round_trip(self, synthetic_bank: TemplateBank) -> None:
        """Test that a bank survives its JSON document form."""
        restored = TemplateBank.from_dict(synthetic_bank.to_dict())

        assert restored.config == synthetic_bank.config
        assert len(restored) == len(synthetic_bank)
        np.testing.assert_array_equal(
            restored.lookup(60, "piano").spectrum, synthetic_bank.lookup(60, "piano").spectrum
        )

    def test_synthetic_bank_size(self) -> None:
        """Test that 48-84 for one instrument gives 37 templates."""
        bank = build_synthetic_bank(range(48, 85), ["flute"], SMALL_CONFIG)

        assert len(bank) == 37
        assert (48, "flute") in bank and (84, "flute") in bank


class TestBankFromDirectory:
    """Tests for learning a bank from recordings."""

    def test_three_recordings(self, tmp_path: Path, small_config: FrontendConfig) -> None:
        """Test that three valid WAVs give a bank of three."""
        for pitch in (60, 64, 67):
            sf.write(
                str(tmp_path / f"piano_{pitch}.wav"),
                0.3 * _tone(pitch, 0.4, small_config),
                small_config.sample_rate,
                subtype="PCM_16",
            )
        (tmp_path / "notes.txt").write_text("ignored")

        bank = build_bank_from_directory(tmp_path, small_config)

        assert sorted(t.key for t in bank) == [(60, "piano"), (64, "piano"), (67, "piano")]

    def test_empty_directory(self, tmp_path: Path, small_config: FrontendConfig) -> None:
        """Test that a directory without recordings is an error."""
        with pytest.raises(ValidationError, match="no <instrument>_<pitch>.wav"):
            build_bank_from_directory(tmp_path, small_config)


class TestParsePitchRange:
    """Tests for pitch range parsing."""

    def test_range(self) -> None:
        """Test an inclusive range."""
        assert parse_pitch_range("48-84") == list(range(48, 85))

    def test_list(self) -> None:
        """Test a comma-separated list."""
        assert parse_pitch_range("60,64,67") == [60, 64, 67]

    def test_malformed(self) -> None:
        """Test that garbage is a validation error."""
        with pytest.raises(ValidationError):
            parse_pitch_range("sixty")

    def test_reversed(self) -> None:
        """Test that a reversed range is rejected."""
        with pytest.raises(ValidationError):
            parse_pitch_range("84-48")
