"""Test fixtures for Scorealign.

Scores, frontend configs and template banks small enough for fast tests:
- scores/progression.json: ten chords of 0.25 s, no note set repeated
- scores/common_notes.json: consecutive units sharing notes ({C4} -> {C4,E4} -> {E4} ...)
"""

import json
from pathlib import Path
from typing import Any

import numpy as np

from scorealign.models.bank import NoteTemplate, TemplateBank
from scorealign.models.spectral import FrontendConfig

# Path to fixtures directory
FIXTURES_DIR = Path(__file__).parent

SCORES_DIR = FIXTURES_DIR / "scores"
PROGRESSION_SCORE = SCORES_DIR / "progression.json"
COMMON_NOTES_SCORE = SCORES_DIR / "common_notes.json"

# 257 bins, 16 ms hop
SMALL_CONFIG = FrontendConfig(sample_rate=8000, fft_size=512, hop_size=128)

# 9 bins; only for hand-built one-hot templates
TINY_CONFIG = FrontendConfig(sample_rate=8000, fft_size=16, hop_size=8)

# Pitch range covering every fixture score
FIXTURE_PITCHES = list(range(55, 80))


def note(pitch: int, onset: float, offset: float, instrument: str = "piano") -> dict[str, Any]:
    """One score event as it appears in score JSON."""
    return {"pitch": pitch, "instrument": instrument, "onset": onset, "offset": offset}


def chord_score(chords: list[list[int]], duration: float = 0.25) -> dict[str, Any]:
    """Score document playing each chord for ``duration`` seconds, back to back."""
    return {
        "notes": [
            note(pitch, k * duration, (k + 1) * duration)
            for k, chord in enumerate(chords)
            for pitch in chord
        ]
    }


def write_score(path: Path, document: dict[str, Any]) -> Path:
    """Write a score document and return its path."""
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(document))
    return path


def one_hot_bank(
    pitches: list[int],
    config: FrontendConfig = TINY_CONFIG,
    instrument: str = "piano",
    overlap: float = 0.0,
) -> TemplateBank:
    """Bank whose template i peaks at bin i.

    With ``overlap`` > 0 every template also leaks into the next bin, which
    makes neighbouring templates mildly correlated.
    """
    templates = []
    for i, pitch in enumerate(pitches):
        spectrum = np.zeros(config.n_bins)
        spectrum[i] = 1.0
        if overlap:
            spectrum[i + 1] = overlap
        templates.append(
            NoteTemplate(pitch=pitch, instrument=instrument, spectrum=spectrum / np.linalg.norm(spectrum))
        )
    return TemplateBank.from_templates(templates, config)
