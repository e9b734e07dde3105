"""Spectral frontend: STFT magnitudes and unit-norm frame normalization.

Frames are not centred: frame t covers samples [t * hop, t * hop + fft_size).
Normalization divides every frame by its Euclidean norm so that comparisons do
not depend on playback gain; all-zero frames are kept as zeros and flagged silent.
"""

import logging
from functools import lru_cache
from pathlib import Path

import numpy as np
import soundfile as sf
from numpy.lib.stride_tricks import sliding_window_view
from scipy.signal import get_window

from scorealign.errors import FrontendError
from scorealign.models.spectral import FrontendConfig, Spectrogram

logger = logging.getLogger(__name__)

SUPPORTED_SUBTYPES = frozenset({"PCM_16", "FLOAT"})


@lru_cache(maxsize=16)
def analysis_window(name: str, size: int) -> np.ndarray:
    """Periodic analysis window (read-only, cached)."""
    try:
        window = np.asarray(get_window(name, size, fftbins=True), dtype=np.float64)
    except ValueError as e:
        raise FrontendError(f"unknown window '{name}': {e}") from e
    window.setflags(write=False)
    return window


def stft_magnitude(samples: np.ndarray, config: FrontendConfig) -> Spectrogram:
    """Magnitude of the windowed DFT of every full frame.

    Args:
        samples: Mono PCM samples
        config: Analysis parameters

    Returns:
        Unnormalized spectrogram with floor((N - fft_size) / hop_size) + 1 frames

    Raises:
        FrontendError: If fewer than fft_size samples are given
    """
    signal = np.asarray(samples, dtype=np.float64)
    if signal.ndim != 1:
        raise FrontendError(f"mono samples expected (got shape {signal.shape})")
    if signal.shape[0] < config.fft_size:
        raise FrontendError(
            f"input too short: {signal.shape[0]} samples, need at least {config.fft_size}"
        )
    if not np.all(np.isfinite(signal)):
        raise FrontendError("input contains non-finite samples")

    frames = sliding_window_view(signal, config.fft_size)[:: config.hop_size]
    windowed = frames * analysis_window(config.window, config.fft_size)
    magnitudes = np.abs(np.fft.rfft(windowed, axis=1))
    return Spectrogram(frames=magnitudes, config=config, normalized=False)


def normalize_frame(v: np.ndarray) -> tuple[np.ndarray, bool]:
    """Scale a frame to unit Euclidean norm.

    Args:
        v: Finite nonnegative vector

    Returns:
        (unit vector, silent flag); an all-zero input returns zeros and True
    """
    vector = np.asarray(v, dtype=np.float64)
    if not np.all(np.isfinite(vector)):
        raise FrontendError("frame contains non-finite values")
    norm = float(np.sqrt(np.dot(vector, vector)))
    if norm == 0.0:
        return np.zeros_like(vector), True
    return vector / norm, False


def normalize_spectrogram(s: Spectrogram) -> Spectrogram:
    """Normalize every frame of a spectrogram (vectorized normalize_frame)."""
    norms = np.sqrt(np.einsum("tf,tf->t", s.frames, s.frames))
    silent = norms == 0.0
    safe = np.where(silent, 1.0, norms)
    frames = s.frames / safe[:, None]
    frames[silent] = 0.0
    if np.any(silent):
        logger.debug("%d of %d frames are silent", int(silent.sum()), s.n_frames)
    return Spectrogram(frames=frames, config=s.config, normalized=True, silent=silent)


def read_wav(path: Path, config: FrontendConfig) -> np.ndarray:
    """Read a 16-bit PCM or 32-bit float WAV as mono float samples.

    Stereo input is averaged to mono.

    Raises:
        FrontendError: For unsupported encodings or a sample rate other than config.sample_rate
    """
    try:
        info = sf.info(str(path))
    except RuntimeError as e:
        raise FrontendError(f"{path}: not a readable audio file ({e})") from e
    if info.subtype not in SUPPORTED_SUBTYPES:
        raise FrontendError(f"{path}: unsupported WAV encoding {info.subtype}")
    if info.samplerate != config.sample_rate:
        raise FrontendError(
            f"{path}: sample rate {info.samplerate} Hz differs from configured {config.sample_rate} Hz"
        )
    data, _ = sf.read(str(path), dtype="float64", always_2d=True)
    return data.mean(axis=1)


def load_audio_spectrogram(path: Path, config: FrontendConfig) -> Spectrogram:
    """Read a WAV file and return its normalized spectrogram."""
    samples = read_wav(path, config)
    spectrogram = normalize_spectrogram(stft_magnitude(samples, config))
    logger.info("Analyzed %s: %d frames", path.name, spectrogram.n_frames)
    return spectrogram
