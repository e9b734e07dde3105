"""Shared pytest fixtures for Scorealign tests.

Fixtures are organized by category:
- Frontend fixtures: small analysis configs that keep tests fast
- Bank fixtures: synthetic and one-hot template banks
- Score fixtures: timelines built from the fixture scores
- Workspace fixtures: a temporary directory holding a project config
"""

from pathlib import Path

import pytest
import yaml

from scorealign.analyzers.registry import reset_registry
from scorealign.analyzers.score_units import build_timeline, load_score
from scorealign.analyzers.template_bank import build_synthetic_bank
from scorealign.models.bank import TemplateBank
from scorealign.models.score import ScoreTimeline
from scorealign.models.spectral import FrontendConfig
from tests.fixtures import (
    COMMON_NOTES_SCORE,
    FIXTURE_PITCHES,
    PROGRESSION_SCORE,
    SMALL_CONFIG,
    TINY_CONFIG,
)

# =============================================================================
# Frontend Fixtures
# =============================================================================


@pytest.fixture
def small_config() -> FrontendConfig:
    """8 kHz, 512-point FFT, 128-sample hop (257 bins, 16 ms frames)."""
    return SMALL_CONFIG


@pytest.fixture
def tiny_config() -> FrontendConfig:
    """16-point FFT (9 bins) for hand-built templates."""
    return TINY_CONFIG


# =============================================================================
# Bank Fixtures
# =============================================================================


@pytest.fixture(scope="session")
def synthetic_bank() -> TemplateBank:
    """Synthetic piano templates over the fixture pitch range, small config."""
    return build_synthetic_bank(FIXTURE_PITCHES, ["piano"], SMALL_CONFIG)


@pytest.fixture(scope="session")
def default_bank() -> TemplateBank:
    """Synthetic piano templates over the fixture pitch range, default frontend."""
    return build_synthetic_bank(FIXTURE_PITCHES, ["piano"], FrontendConfig())


# =============================================================================
# Score Fixtures
# =============================================================================


@pytest.fixture
def progression_timeline() -> ScoreTimeline:
    """Ten chord units, no note set repeated."""
    return build_timeline(load_score(PROGRESSION_SCORE))


@pytest.fixture
def common_notes_timeline() -> ScoreTimeline:
    """Ten units where every consecutive pair shares a note."""
    return build_timeline(load_score(COMMON_NOTES_SCORE))


# =============================================================================
# Workspace Fixtures
# =============================================================================


@pytest.fixture
def workspace(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Path:
    """Temporary working directory with a scorealign.yaml using the small config."""
    config = {
        "frontend": SMALL_CONFIG.to_dict(),
        "training": {"iterations": 60},
    }
    (tmp_path / "scorealign.yaml").write_text(yaml.safe_dump(config))
    monkeypatch.chdir(tmp_path)
    return tmp_path


@pytest.fixture(autouse=True)
def fresh_registry() -> None:
    """Start every test with the built-in measure registry."""
    reset_registry()
