"""Scorealign - Audio-to-score alignment.

Scorealign synchronizes an audio performance with its symbolic score. The score
is arranged into score units (maximal spans of constant concurrent notes), a
spectral pattern is learned for every unit from per-note templates, and each
performance frame is decomposed over the notes of every pair of consecutive
units. The resulting distortion matrix is aligned with dynamic time warping.

Core principles:
- Determinism: same inputs, config and seed produce identical output
- Preflight Validation: inputs are checked before any computation
- Scale Invariance: frames and note templates are compared at unit norm
- Pluggable Measures: distortion measures are adapters behind a registry
"""

__version__ = "0.1.0"
__author__ = "Scorealign Contributors"
