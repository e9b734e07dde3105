"""Unit tests for DTW over distortion matrices."""

from collections.abc import Iterator

import numpy as np
import pytest

from scorealign.analyzers.dtw import band_mask, dtw, extract_onsets, minimum_path_length
from scorealign.errors import AlignmentError, ValidationError
from scorealign.models.alignment import AlignmentPath, DistortionMatrix
from scorealign.models.spectral import FrontendConfig


def _paths(n_units: int, n_frames: int, allow_skip: bool) -> Iterator[list[int]]:
    """Every unit sequence from unit 0 at t=0 to unit K-1 at t=T-1."""
    max_step = 2 if allow_skip else 1

    def extend(path: list[int]) -> Iterator[list[int]]:
        if len(path) == n_frames:
            if path[-1] == n_units - 1:
                yield path
            return
        remaining = n_frames - len(path)
        for step in range(max_step + 1):
            k = path[-1] + step
            if k >= n_units or n_units - 1 - k > max_step * (remaining - 1):
                continue
            yield from extend([*path, k])

    yield from extend([0])


def _brute_force(values: np.ndarray, allow_skip: bool, band: int | None) -> float | None:
    n_units, n_frames = values.shape
    allowed = band_mask(n_units, n_frames, band)
    best: float | None = None
    for units in _paths(n_units, n_frames, allow_skip):
        if not all(allowed[k, t] for t, k in enumerate(units)):
            continue
        total = float(values[0, 0])
        for t in range(1, n_frames):
            total = total + float(values[units[t], t])
        if best is None or total < best:
            best = total
    return best


class TestDtwOracle:
    """Tests DTW against exhaustive path enumeration."""

    @pytest.mark.parametrize("allow_skip", [False, True])
    def test_random_matrices(self, allow_skip: bool) -> None:
        """Test 200 matrices with K <= 5 and T <= 10, optional band."""
        rng = np.random.default_rng(17)
        for _ in range(200):
            n_units = int(rng.integers(1, 6))
            n_frames = int(rng.integers(minimum_path_length(n_units, allow_skip), 11))
            values = rng.random((n_units, n_frames))
            band = [None, None, 1, 2, 3][int(rng.integers(5))]

            expected = _brute_force(values, allow_skip, band)

            matrix = DistortionMatrix(values=values)
            if expected is None:
                with pytest.raises(AlignmentError, match="band"):
                    dtw(matrix, allow_skip=allow_skip, band=band)
                continue
            path = dtw(matrix, allow_skip=allow_skip, band=band)
            assert path.total_cost == expected

    def test_path_shape(self) -> None:
        """Test endpoints, monotonicity, one step per frame and the reported cost."""
        rng = np.random.default_rng(2)
        values = rng.random((4, 12))

        path = dtw(DistortionMatrix(values=values))

        assert path.steps[0] == (0, 0)
        assert path.steps[-1] == (3, 11)
        assert [t for _, t in path.steps] == list(range(12))
        assert all(0 <= b[0] - a[0] <= 1 for a, b in zip(path.steps, path.steps[1:], strict=False))
        assert path.total_cost == pytest.approx(sum(values[k, t] for k, t in path.steps))
        assert path.path_length == 12


class TestDtwBehaviour:
    """Tests for step rules, ties, bands and errors."""

    def test_ties_prefer_stay(self) -> None:
        """Test that an all-zero matrix advances at the first frame and then stays."""
        path = dtw(DistortionMatrix(values=np.zeros((2, 3))))

        assert path.steps == [(0, 0), (1, 1), (1, 2)]
        assert path.onset_frames == {0: 0, 1: 1}

    def test_single_unit(self) -> None:
        """Test that K=1 keeps every frame on unit 0."""
        values = np.array([[1.0, 2.0, 3.0]])

        path = dtw(DistortionMatrix(values=values))

        assert path.steps == [(0, 0), (0, 1), (0, 2)]
        assert path.total_cost == 6.0

    def test_performance_too_short(self) -> None:
        """Test that T < K without skips is an error."""
        with pytest.raises(AlignmentError, match="performance shorter than score path"):
            dtw(DistortionMatrix(values=np.zeros((3, 2))))

    def test_skip_allows_shorter_performance(self) -> None:
        """Test K=3, T=2 with skips: the middle unit onsets with the last."""
        path = dtw(DistortionMatrix(values=np.zeros((3, 2))), allow_skip=True)

        assert path.steps == [(0, 0), (2, 1)]
        assert path.onset_frames == {0: 0, 1: 1, 2: 1}

    def test_constant_shift(self) -> None:
        """Test that adding c to every cell keeps the path and adds c*T to the cost."""
        values = np.random.default_rng(3).integers(0, 9, size=(4, 10)).astype(np.float64)

        base = dtw(DistortionMatrix(values=values))
        shifted = dtw(DistortionMatrix(values=values + 5.0))

        assert shifted.steps == base.steps
        assert shifted.total_cost == base.total_cost + 5.0 * 10

    def test_band_limits_path(self) -> None:
        """Test that a band forces an early advance and raises the cost."""
        values = np.ones((2, 20))
        values[0, :] = 0.0
        values[1, 19] = 0.0

        free = dtw(DistortionMatrix(values=values))
        banded = dtw(DistortionMatrix(values=values), band=10)

        assert free.total_cost == 0.0
        assert free.onset_frames[1] == 19
        assert banded.total_cost == 8.0
        assert banded.onset_frames[1] == 11

    def test_band_excludes_every_path(self) -> None:
        """Test that a too-narrow band is reported."""
        values = np.zeros((2, 20))

        with pytest.raises(AlignmentError, match="no alignment path fits within a band"):
            dtw(DistortionMatrix(values=values), band=2)

    def test_band_below_one_rejected(self) -> None:
        """Test that a band under one frame is invalid."""
        with pytest.raises(ValidationError):
            band_mask(3, 10, 0)

    def test_no_band_allows_everything(self) -> None:
        """Test the unconstrained mask."""
        assert band_mask(3, 7, None).all()

    def test_single_unit_with_narrow_band(self) -> None:
        """Test that a one-unit score aligns under a band narrower than the performance."""
        path = dtw(DistortionMatrix(values=np.zeros((1, 10))), band=3)

        assert path.steps == [(0, t) for t in range(10)]
        assert path.onset_frames == {0: 0}
        assert band_mask(1, 10, 3).all()

    def test_single_unit_band_still_validated(self) -> None:
        """Test that a band under one frame is rejected for one unit too."""
        with pytest.raises(ValidationError):
            band_mask(1, 10, 0)

    def test_onset_times_need_config(self) -> None:
        """Test that onset times are filled only when the matrix knows its config."""
        config = FrontendConfig()
        values = np.zeros((2, 4))

        without = dtw(DistortionMatrix(values=values))
        with_config = dtw(DistortionMatrix(values=values, config=config))

        assert without.onset_times == {}
        assert with_config.onset_times[1] == pytest.approx(config.frame_time(1))


class TestMinimumPathLength:
    """Tests for the shortest admissible performance."""

    @pytest.mark.parametrize(
        ("n_units", "allow_skip", "expected"),
        [(1, False, 1), (5, False, 5), (1, True, 1), (2, True, 2), (3, True, 2), (4, True, 3), (5, True, 3)],
    )
    def test_values(self, n_units: int, allow_skip: bool, expected: int) -> None:
        """Test K without skips and ceil((K-1)/2)+1 with skips."""
        assert minimum_path_length(n_units, allow_skip) == expected


class TestExtractOnsets:
    """Tests for frame-to-seconds onset conversion."""

    def test_frame_centre_times(self) -> None:
        """Test that frame 100 maps to about 1.2539 s at the default config."""
        steps = [(0, t) for t in range(100)] + [(1, 100)]
        path = AlignmentPath(steps=steps, onset_frames={0: 0, 1: 100}, total_cost=0.0)

        onsets = extract_onsets(path, FrontendConfig())

        assert onsets[0] == pytest.approx(2048 / 22050)
        assert onsets[1] == pytest.approx(1.2539, abs=1e-4)

    def test_skipped_unit_shares_frame(self) -> None:
        """Test that a skipped unit takes the frame of the skip."""
        path = AlignmentPath(steps=[(0, 0), (0, 1), (2, 2)], onset_frames={}, total_cost=0.0)
        config = FrontendConfig()

        onsets = extract_onsets(path, config)

        assert onsets[1] == onsets[2] == pytest.approx(config.frame_time(2))
