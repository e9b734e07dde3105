"""Evaluation entities.

- WarpMap: piecewise-linear score-time to performance-time map
- EvalReport: per-unit onset errors and threshold fractions
- CorpusCase: one reproducible synthetic performance in a corpus manifest
"""

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from scorealign.errors import ValidationError

MIN_SLOPE = 0.5
MAX_SLOPE = 2.0
SLOPE_SLACK = 1e-9

DEFAULT_THRESHOLDS: tuple[float, ...] = (0.05, 0.10, 0.20)


@dataclass(frozen=True)
class WarpMap:
    """Strictly increasing piecewise-linear time warp with warp(0) == 0.

    The map is defined by breakpoints (score_s, performance_s); past the last
    breakpoint it continues with the last segment's slope.

    Attributes:
        breakpoints: Breakpoints including (0, 0), strictly increasing in both coordinates
    """

    breakpoints: tuple[tuple[float, float], ...] = ((0.0, 0.0), (1.0, 1.0))

    def __post_init__(self) -> None:
        """Validate origin, monotonicity and slope bounds."""
        points = self.breakpoints
        if len(points) < 2:
            raise ValidationError("warp map needs at least two breakpoints")
        if points[0] != (0.0, 0.0):
            raise ValidationError("warp map must start at (0, 0)")
        for (s0, p0), (s1, p1) in zip(points, points[1:], strict=False):
            if s1 <= s0:
                raise ValidationError("warp breakpoints must increase in score time")
            slope = (p1 - p0) / (s1 - s0)
            if not MIN_SLOPE - SLOPE_SLACK <= slope <= MAX_SLOPE + SLOPE_SLACK:
                raise ValidationError(
                    f"warp slope {slope:.4g} outside [{MIN_SLOPE}, {MAX_SLOPE}]"
                )

    @classmethod
    def identity(cls) -> "WarpMap":
        """The identity warp."""
        return cls()

    @classmethod
    def constant(cls, slope: float) -> "WarpMap":
        """Uniform tempo change: warp(s) = slope * s."""
        return cls(breakpoints=((0.0, 0.0), (1.0, float(slope))))

    @classmethod
    def from_segments(cls, durations: list[float], slopes: list[float]) -> "WarpMap":
        """Build from score-time segment durations and their slopes."""
        if len(durations) != len(slopes) or not durations:
            raise ValidationError("warp needs one slope per segment duration")
        points = [(0.0, 0.0)]
        for duration, slope in zip(durations, slopes, strict=True):
            s, p = points[-1]
            points.append((s + float(duration), p + float(duration) * float(slope)))
        return cls(breakpoints=tuple(points))

    @property
    def _arrays(self) -> tuple[np.ndarray, np.ndarray]:
        score, perf = zip(*self.breakpoints, strict=True)
        return np.asarray(score, dtype=np.float64), np.asarray(perf, dtype=np.float64)

    def __call__(self, score_time: Any) -> Any:
        """Map score time(s) to performance time(s)."""
        return _extrapolated_interp(score_time, *self._arrays)

    def inverse(self, performance_time: Any) -> Any:
        """Map performance time(s) back to score time(s)."""
        score, perf = self._arrays
        return _extrapolated_interp(performance_time, perf, score)

    def to_list(self) -> list[list[float]]:
        """Breakpoints as a JSON-friendly list."""
        return [[s, p] for s, p in self.breakpoints]

    @classmethod
    def from_list(cls, data: list[list[float]]) -> "WarpMap":
        """Build from a JSON breakpoint list."""
        try:
            points = tuple((float(s), float(p)) for s, p in data)
        except (TypeError, ValueError) as e:
            raise ValidationError(f"malformed warp breakpoints: {e}") from e
        return cls(breakpoints=points)


def _extrapolated_interp(x: Any, xp: np.ndarray, fp: np.ndarray) -> Any:
    values = np.interp(x, xp, fp)
    left_slope = (fp[1] - fp[0]) / (xp[1] - xp[0])
    right_slope = (fp[-1] - fp[-2]) / (xp[-1] - xp[-2])
    values = np.where(np.asarray(x) < xp[0], fp[0] + (np.asarray(x) - xp[0]) * left_slope, values)
    values = np.where(np.asarray(x) > xp[-1], fp[-1] + (np.asarray(x) - xp[-1]) * right_slope, values)
    if np.ndim(values) == 0:
        return float(values)
    return values


@dataclass
class EvalReport:
    """Onset accuracy of one alignment.

    Attributes:
        errors: Absolute onset error in seconds per unit k
        mean: Mean absolute error
        median: Median absolute error
        max: Largest absolute error
        fractions: Fraction of units with error <= threshold, per threshold
    """

    errors: dict[int, float]
    mean: float
    median: float
    max: float
    fractions: dict[float, float] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        """Convert to the report JSON."""
        return {
            "units": len(self.errors),
            "mean_error_s": self.mean,
            "median_error_s": self.median,
            "max_error_s": self.max,
            "fractions": {f"{threshold:.2f}": value for threshold, value in sorted(self.fractions.items())},
            "errors": [{"k": k, "error_s": self.errors[k]} for k in sorted(self.errors)],
        }


@dataclass(frozen=True)
class CorpusCase:
    """One synthetic performance of a corpus manifest.

    Attributes:
        name: Case identifier (used for output file names)
        score: Path to the score JSON
        warp: Ground-truth time warp
        seed: Noise seed
        noise: Relative spectral noise level sigma
    """

    name: str
    score: str
    warp: WarpMap
    seed: int = 0
    noise: float = 0.0

    def __post_init__(self) -> None:
        """Validate noise level."""
        if not np.isfinite(self.noise) or self.noise < 0:
            raise ValidationError(f"case {self.name}: noise must be >= 0 (got {self.noise})")

    def to_dict(self) -> dict[str, Any]:
        """Convert to the manifest JSON entry."""
        return {
            "name": self.name,
            "score": self.score,
            "warp": self.warp.to_list(),
            "seed": self.seed,
            "noise": self.noise,
        }
