"""Spectral frontend entities.

- FrontendConfig: analysis parameters shared by templates and inputs
- Spectrogram: T x F magnitude frames, optionally normalized
"""

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from scorealign.errors import ConfigError, FrontendError

NORM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class FrontendConfig:
    """STFT analysis parameters.

    Attributes:
        sample_rate: Sampling rate in Hz
        fft_size: DFT length in samples (power of two)
        hop_size: Frame advance in samples (0 < hop_size <= fft_size)
        window: Window name understood by scipy.signal.get_window
    """

    sample_rate: int = 22050
    fft_size: int = 4096
    hop_size: int = 256
    window: str = "hann"

    def __post_init__(self) -> None:
        """Validate frontend parameters."""
        if self.sample_rate <= 0:
            raise ConfigError("frontend.sample_rate", f"must be positive (got {self.sample_rate})")
        if self.fft_size <= 0 or self.fft_size & (self.fft_size - 1):
            raise ConfigError("frontend.fft_size", f"must be a power of two (got {self.fft_size})")
        if not 0 < self.hop_size <= self.fft_size:
            raise ConfigError(
                "frontend.hop_size", f"must be in (0, fft_size] (got {self.hop_size})"
            )
        if not self.window:
            raise ConfigError("frontend.window", "window name is empty")

    @property
    def n_bins(self) -> int:
        """Number of one-sided frequency bins F."""
        return self.fft_size // 2 + 1

    @property
    def bin_hz(self) -> float:
        """Frequency spacing of DFT bins."""
        return self.sample_rate / self.fft_size

    @property
    def frame_period(self) -> float:
        """Seconds between consecutive frames."""
        return self.hop_size / self.sample_rate

    @property
    def frame_center_offset(self) -> float:
        """Seconds from a frame's first sample to its centre."""
        return self.fft_size / (2 * self.sample_rate)

    def frame_time(self, t: int | np.ndarray) -> Any:
        """Centre time in seconds of frame ``t``."""
        return t * self.frame_period + self.frame_center_offset

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary for serialization."""
        return {
            "sample_rate": self.sample_rate,
            "fft_size": self.fft_size,
            "hop_size": self.hop_size,
            "window": self.window,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "FrontendConfig":
        """Build from a dictionary, rejecting unknown keys."""
        unknown = set(data) - {"sample_rate", "fft_size", "hop_size", "window"}
        if unknown:
            raise ConfigError(f"frontend.{sorted(unknown)[0]}", "unknown key")
        defaults = cls()
        return cls(
            sample_rate=int(data.get("sample_rate", defaults.sample_rate)),
            fft_size=int(data.get("fft_size", defaults.fft_size)),
            hop_size=int(data.get("hop_size", defaults.hop_size)),
            window=str(data.get("window", defaults.window)),
        )


@dataclass
class Spectrogram:
    """Magnitude spectrogram.

    Attributes:
        frames: T x F array of nonnegative magnitudes
        config: Analysis parameters the frames were computed under
        normalized: Whether every non-silent frame has unit Euclidean norm
        silent: Length-T mask of all-zero frames (set by normalization)
    """

    frames: np.ndarray
    config: FrontendConfig
    normalized: bool = False
    silent: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=bool))

    def __post_init__(self) -> None:
        """Validate shape and sign invariants."""
        self.frames = np.asarray(self.frames, dtype=np.float64)
        if self.frames.ndim != 2:
            raise FrontendError(f"spectrogram must be 2-D (got shape {self.frames.shape})")
        if self.frames.shape[1] != self.config.n_bins:
            raise FrontendError(
                f"spectrogram has {self.frames.shape[1]} bins, config expects {self.config.n_bins}"
            )
        if not np.all(np.isfinite(self.frames)) or np.any(self.frames < 0):
            raise FrontendError("spectrogram entries must be finite and nonnegative")
        if self.silent.size == 0:
            self.silent = ~np.any(self.frames > 0, axis=1)
        if self.silent.shape != (self.n_frames,):
            raise FrontendError("silent mask length does not match frame count")

    @property
    def n_frames(self) -> int:
        """Number of frames T."""
        return int(self.frames.shape[0])

    @property
    def n_bins(self) -> int:
        """Number of bins F."""
        return int(self.frames.shape[1])
