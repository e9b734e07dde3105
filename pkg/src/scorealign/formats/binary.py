"""Binary caches for spectrograms and distortion matrices.

Spectrogram ("SALSPEC1"): little-endian header
    magic[8] u32 T  u32 F  u32 sample_rate  u32 fft_size  u32 hop_size  u8 normalized
then T*F float32 values, row-major by frame.

Distortion matrix ("SALDIST1"): magic[8] u32 K  u32 T, then K*T float32 values
row-major by unit.

The analysis window is not stored; spectrograms are read back with the
configured window name (hann unless given).
"""

import struct
from pathlib import Path

import numpy as np

from scorealign.errors import FormatError
from scorealign.models.alignment import DistortionKind, DistortionMatrix
from scorealign.models.spectral import FrontendConfig, Spectrogram

SPECTROGRAM_MAGIC = b"SALSPEC1"
MATRIX_MAGIC = b"SALDIST1"

_SPEC_HEADER = struct.Struct("<8s5IB")
_MATRIX_HEADER = struct.Struct("<8s2I")
_VALUE = np.dtype("<f4")


def _read_payload(path: Path, data: bytes, offset: int, rows: int, cols: int) -> np.ndarray:
    expected = rows * cols * _VALUE.itemsize
    if len(data) - offset != expected:
        raise FormatError(str(path), f"expected {expected} payload bytes, found {len(data) - offset}")
    return np.frombuffer(data, dtype=_VALUE, offset=offset).reshape(rows, cols).astype(np.float64)


def write_spectrogram(spectrogram: Spectrogram, path: Path) -> None:
    """Write a spectrogram as SALSPEC1."""
    config = spectrogram.config
    header = _SPEC_HEADER.pack(
        SPECTROGRAM_MAGIC,
        spectrogram.n_frames,
        spectrogram.n_bins,
        config.sample_rate,
        config.fft_size,
        config.hop_size,
        int(spectrogram.normalized),
    )
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(header + spectrogram.frames.astype(_VALUE).tobytes())


def read_spectrogram(path: Path, window: str = "hann") -> Spectrogram:
    """Read a SALSPEC1 file.

    Raises:
        FormatError: On a bad magic, truncated payload or inconsistent header
    """
    data = path.read_bytes()
    if len(data) < _SPEC_HEADER.size:
        raise FormatError(str(path), "file too short for a spectrogram header")
    magic, n_frames, n_bins, sample_rate, fft_size, hop_size, normalized = _SPEC_HEADER.unpack_from(data)
    if magic != SPECTROGRAM_MAGIC:
        raise FormatError(str(path), f"bad magic {magic!r}, expected {SPECTROGRAM_MAGIC!r}")
    config = FrontendConfig(
        sample_rate=sample_rate, fft_size=fft_size, hop_size=hop_size, window=window
    )
    if n_bins != config.n_bins:
        raise FormatError(str(path), f"{n_bins} bins do not match fft_size {fft_size}")
    frames = _read_payload(path, data, _SPEC_HEADER.size, n_frames, n_bins)
    if not normalized:
        return Spectrogram(frames=frames, config=config, normalized=False)
    # Unit norm holds to float32 precision only; restore it exactly
    norms = np.linalg.norm(frames, axis=1)
    silent = norms == 0.0
    frames[~silent] /= norms[~silent, None]
    return Spectrogram(frames=frames, config=config, normalized=True, silent=silent)


def write_matrix(matrix: DistortionMatrix, path: Path) -> None:
    """Write a distortion matrix as SALDIST1."""
    n_units, n_frames = matrix.shape
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(
        _MATRIX_HEADER.pack(MATRIX_MAGIC, n_units, n_frames)
        + matrix.values.astype(_VALUE).tobytes()
    )


def read_matrix(
    path: Path,
    config: FrontendConfig | None = None,
    kind: DistortionKind = DistortionKind.NOVEL,
    beta: float | None = None,
) -> DistortionMatrix:
    """Read a SALDIST1 file.

    The format carries no config or kind; pass them to get onset times.

    Raises:
        FormatError: On a bad magic or truncated payload
    """
    data = path.read_bytes()
    if len(data) < _MATRIX_HEADER.size:
        raise FormatError(str(path), "file too short for a matrix header")
    magic, n_units, n_frames = _MATRIX_HEADER.unpack_from(data)
    if magic != MATRIX_MAGIC:
        raise FormatError(str(path), f"bad magic {magic!r}, expected {MATRIX_MAGIC!r}")
    values = _read_payload(path, data, _MATRIX_HEADER.size, n_units, n_frames)
    return DistortionMatrix(values=values, kind=kind, beta=beta, config=config)
