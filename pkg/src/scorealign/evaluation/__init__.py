"""Synthetic evaluation: ground-truthed performances and onset accuracy."""

from scorealign.evaluation.manifest import load_manifest, save_manifest
from scorealign.evaluation.metrics import average_reports, evaluate
from scorealign.evaluation.synthesis import synth_performance

__all__ = [
    "average_reports",
    "evaluate",
    "load_manifest",
    "save_manifest",
    "synth_performance",
]
