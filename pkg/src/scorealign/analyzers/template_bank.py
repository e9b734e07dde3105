"""Note template construction.

Templates come from two sources:
- learned: averaged sustain frames of an isolated-note recording
- synthetic: a harmonic comb of window-mainlobe peaks with h**-gamma decay,
  used when no isolated-note recordings are available
"""

import logging
import re
from collections.abc import Iterable
from functools import lru_cache
from pathlib import Path

import numpy as np

from scorealign.analyzers.frontend import analysis_window, normalize_frame, read_wav, stft_magnitude
from scorealign.errors import SilentRecordingError, ValidationError
from scorealign.models.bank import InstrumentProfile, NoteTemplate, TemplateBank
from scorealign.models.score import MAX_PITCH, MIN_PITCH
from scorealign.models.spectral import FrontendConfig

logger = logging.getLogger(__name__)

# Sustain frames carry at least this fraction of the loudest frame's energy
SUSTAIN_ENERGY_GATE = 0.10

# <instrument>_<pitch>.wav
RECORDING_NAME = re.compile(r"^(?P<instrument>.+)_(?P<pitch>\d+)\.wav$", re.IGNORECASE)


def midi_to_hz(pitch: int) -> float:
    """Equal-tempered fundamental frequency of a MIDI pitch."""
    return 440.0 * 2.0 ** ((pitch - 69) / 12.0)


def learn_template(
    recording: np.ndarray,
    pitch: int,
    instrument: str,
    config: FrontendConfig,
) -> NoteTemplate:
    """Learn a note template from an isolated-note recording.

    The template is the normalized mean of all frames whose energy reaches
    SUSTAIN_ENERGY_GATE of the maximum frame energy.

    Raises:
        SilentRecordingError: If no frame has energy
        FrontendError: If the recording is shorter than one frame
    """
    spectrogram = stft_magnitude(recording, config)
    energies = np.einsum("tf,tf->t", spectrogram.frames, spectrogram.frames)
    peak = float(energies.max())
    if peak <= 0.0:
        raise SilentRecordingError(pitch, instrument)

    sustain = energies >= SUSTAIN_ENERGY_GATE * peak
    spectrum, _ = normalize_frame(spectrogram.frames[sustain].mean(axis=0))
    logger.debug(
        "Learned template (%d, %s) from %d/%d sustain frames",
        pitch,
        instrument,
        int(sustain.sum()),
        spectrogram.n_frames,
    )
    return NoteTemplate(pitch=pitch, instrument=instrument, spectrum=spectrum)


def _window_response(name: str, size: int, offsets: np.ndarray) -> np.ndarray:
    """Magnitude response of the window at fractional bin offsets, peak 1."""
    window = analysis_window(name, size)
    n = np.arange(size)
    kernel = np.exp(-2j * np.pi * np.outer(offsets, n) / size)
    return np.abs(kernel @ window) / window.sum()


@lru_cache(maxsize=16)
def mainlobe_halfwidth(name: str, size: int) -> float:
    """Distance in bins from the mainlobe peak to its first minimum."""
    grid = np.arange(0, 8 * 32 + 1) / 32.0
    response = _window_response(name, size, grid)
    rising = np.nonzero(np.diff(response) > 0)[0]
    if rising.size == 0:
        return float(grid[-1])
    return float(grid[rising[0]])


def synth_template(
    pitch: int,
    instrument: str,
    profile: InstrumentProfile,
    config: FrontendConfig,
) -> NoteTemplate:
    """Synthetic harmonic template.

    Partial h = 1..H is a window-mainlobe peak centred at h * f0 with peak
    amplitude h**-decay; H is clipped so that every partial lies below Nyquist.

    Raises:
        ValidationError: If f0 is at or above Nyquist or the pitch is out of range
    """
    if not MIN_PITCH <= pitch <= MAX_PITCH:
        raise ValidationError(f"pitch {pitch} outside [{MIN_PITCH}, {MAX_PITCH}]")
    f0 = midi_to_hz(pitch)
    nyquist = config.sample_rate / 2.0
    if f0 >= nyquist:
        raise ValidationError(f"f0 {f0:.1f} Hz of pitch {pitch} is at or above Nyquist")

    partials = min(profile.partials, int(np.ceil(nyquist / f0)) - 1)
    halfwidth = mainlobe_halfwidth(config.window, config.fft_size)
    spectrum = np.zeros(config.n_bins)
    for h in range(1, partials + 1):
        centre = h * f0 / config.bin_hz
        lo = max(0, int(np.ceil(centre - halfwidth)))
        hi = min(config.n_bins - 1, int(np.floor(centre + halfwidth)))
        bins = np.arange(lo, hi + 1)
        peak = _window_response(config.window, config.fft_size, bins - centre)
        spectrum[bins] = np.maximum(spectrum[bins], h ** (-profile.decay) * peak)

    unit, _ = normalize_frame(spectrum)
    return NoteTemplate(pitch=pitch, instrument=instrument, spectrum=unit)


def build_synthetic_bank(
    pitches: Iterable[int],
    instruments: Iterable[str],
    config: FrontendConfig,
    profile: InstrumentProfile | None = None,
) -> TemplateBank:
    """Synthetic templates for every (pitch, instrument) combination."""
    profile = profile or InstrumentProfile()
    instrument_list = list(instruments)
    templates = [
        synth_template(pitch, instrument, profile, config)
        for instrument in instrument_list
        for pitch in pitches
    ]
    logger.info(
        "Synthesized %d templates for %s (decay=%s, partials=%d)",
        len(templates),
        ", ".join(instrument_list),
        profile.decay,
        profile.partials,
    )
    return TemplateBank.from_templates(templates, config)


def build_bank_from_directory(directory: Path, config: FrontendConfig) -> TemplateBank:
    """Learn templates from ``<instrument>_<pitch>.wav`` recordings in a directory.

    Raises:
        ValidationError: If the directory holds no matching recordings
    """
    templates: list[NoteTemplate] = []
    for path in sorted(directory.iterdir()):
        match = RECORDING_NAME.match(path.name)
        if not path.is_file() or match is None:
            if path.suffix.lower() == ".wav":
                logger.warning("Skipping %s: name is not <instrument>_<pitch>.wav", path.name)
            continue
        pitch = int(match.group("pitch"))
        if not MIN_PITCH <= pitch <= MAX_PITCH:
            raise ValidationError(f"{path.name}: pitch {pitch} outside [{MIN_PITCH}, {MAX_PITCH}]")
        samples = read_wav(path, config)
        templates.append(learn_template(samples, pitch, match.group("instrument"), config))

    if not templates:
        raise ValidationError(f"no <instrument>_<pitch>.wav recordings in {directory}")
    logger.info("Learned %d templates from %s", len(templates), directory)
    return TemplateBank.from_templates(templates, config)


def parse_pitch_range(text: str) -> list[int]:
    """Parse "48-84" or "60" or "60,64,67" into a list of MIDI pitches."""
    pitches: list[int] = []
    try:
        for part in text.split(","):
            if "-" in part:
                first, last = (int(value) for value in part.split("-", 1))
                if last < first:
                    raise ValidationError(f"empty pitch range '{part}'")
                pitches.extend(range(first, last + 1))
            else:
                pitches.append(int(part))
    except ValueError as e:
        raise ValidationError(f"malformed pitch range '{text}'") from e
    return pitches
