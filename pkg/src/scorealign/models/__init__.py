"""Scorealign data models.

This module exports the core entities used throughout the application:
- Note, ScoreUnit, ScoreTimeline: the score and its k axis
- FrontendConfig, Spectrogram: analysis parameters and magnitude frames
- NoteTemplate, TemplateBank, InstrumentProfile: note spectra
- TrainingRender, UnitPattern: unit renders and learned patterns
- FrameDecomposition, DecompositionTable, DistortionMatrix, AlignmentPath
- WarpMap, EvalReport, CorpusCase: synthetic evaluation
- AlignmentResult, AlignmentStatus, PipelineIssue: pipeline runs
"""

from scorealign.models.alignment import (
    AlignmentPath,
    DecompositionRow,
    DecompositionTable,
    DistortionKind,
    DistortionMatrix,
    FrameDecomposition,
)
from scorealign.models.bank import InstrumentProfile, NoteTemplate, TemplateBank
from scorealign.models.evaluation import CorpusCase, EvalReport, WarpMap
from scorealign.models.patterns import TrainingRender, UnitPattern
from scorealign.models.result import AlignmentResult, AlignmentStatus, PipelineIssue
from scorealign.models.score import Note, NoteKey, ScoreTimeline, ScoreUnit
from scorealign.models.spectral import FrontendConfig, Spectrogram

__all__ = [
    "Note",
    "NoteKey",
    "ScoreUnit",
    "ScoreTimeline",
    "FrontendConfig",
    "Spectrogram",
    "NoteTemplate",
    "TemplateBank",
    "InstrumentProfile",
    "TrainingRender",
    "UnitPattern",
    "FrameDecomposition",
    "DecompositionRow",
    "DecompositionTable",
    "DistortionKind",
    "DistortionMatrix",
    "AlignmentPath",
    "WarpMap",
    "EvalReport",
    "CorpusCase",
    "AlignmentResult",
    "AlignmentStatus",
    "PipelineIssue",
]
