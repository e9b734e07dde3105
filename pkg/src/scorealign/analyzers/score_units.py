"""Score parsing and score-unit segmentation.

The score is swept over the sorted union of all note onsets and offsets; each
span between consecutive boundaries becomes a unit holding the notes that sound
over it. Adjacent spans with identical note sets are merged and gaps become
silence units, so the units tile [0, total_duration].
"""

import json
import logging
from collections import Counter
from pathlib import Path
from typing import Any

from scorealign.errors import ScoreParseError, ScoreValidationError
from scorealign.models.score import Note, NoteKey, ScoreTimeline, ScoreUnit

logger = logging.getLogger(__name__)

# Onset/offset instants closer than this (seconds) are snapped together
SNAP_TOLERANCE = 1e-3

_EVENT_FIELDS = ("pitch", "instrument", "onset", "offset")


def parse_score(document: str) -> list[Note]:
    """Parse a score JSON document into notes, in document order.

    Args:
        document: JSON text of the form {"notes": [{"pitch", "instrument", "onset", "offset"}]}

    Returns:
        One Note per event

    Raises:
        ScoreParseError: If the text is not JSON or does not have the score shape
        ScoreValidationError: If an event violates the note invariants
    """
    try:
        data = json.loads(document)
    except json.JSONDecodeError as e:
        raise ScoreParseError(e.msg, line=e.lineno) from e

    if not isinstance(data, dict) or not isinstance(data.get("notes"), list):
        raise ScoreParseError("top-level object with a 'notes' array expected")

    return [_parse_event(index, event) for index, event in enumerate(data["notes"])]


def _parse_event(index: int, event: Any) -> Note:
    if not isinstance(event, dict):
        raise ScoreValidationError("event must be an object", event_index=index)
    missing = [name for name in _EVENT_FIELDS if name not in event]
    if missing:
        raise ScoreValidationError(f"missing field(s) {', '.join(missing)}", event_index=index)

    pitch = event["pitch"]
    if isinstance(pitch, bool) or not isinstance(pitch, int):
        raise ScoreValidationError(f"pitch must be an integer (got {pitch!r})", event_index=index)
    instrument = event["instrument"]
    if not isinstance(instrument, str) or not instrument:
        raise ScoreValidationError("instrument must be a non-empty string", event_index=index)
    times = []
    for name in ("onset", "offset"):
        value = event[name]
        if isinstance(value, bool) or not isinstance(value, int | float):
            raise ScoreValidationError(f"{name} must be a number (got {value!r})", event_index=index)
        times.append(float(value))

    try:
        return Note(pitch=pitch, instrument=instrument, onset=times[0], offset=times[1])
    except ScoreValidationError as e:
        raise ScoreValidationError(str(e), event_index=index) from e


def load_score(path: Path) -> list[Note]:
    """Read and parse a score JSON file (UTF-8)."""
    try:
        document = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise ScoreParseError(f"{path} is not valid UTF-8") from e
    return parse_score(document)


def _snap_instants(instants: list[float]) -> dict[float, float]:
    """Map every instant to the first instant of its snap cluster."""
    mapping: dict[float, float] = {}
    anchor: float | None = None
    for instant in sorted(set(instants)):
        # Every instant lies within the tolerance of its anchor
        if anchor is None or instant - anchor >= SNAP_TOLERANCE:
            anchor = instant
        mapping[instant] = anchor
    return mapping


def build_timeline(notes: list[Note]) -> ScoreTimeline:
    """Segment notes into the ordered sequence of score units.

    Args:
        notes: Valid notes (any order)

    Returns:
        ScoreTimeline tiling [0, last offset]

    Raises:
        ScoreValidationError: If the note list is empty
    """
    if not notes:
        raise ScoreValidationError("empty score")

    snap = _snap_instants([0.0] + [t for note in notes for t in (note.onset, note.offset)])

    events: list[tuple[float, int, NoteKey]] = []
    for note in notes:
        onset, offset = snap[note.onset], snap[note.offset]
        if offset <= onset:
            logger.warning(
                "Dropping note %s at %.4fs: shorter than the %.0f ms snap tolerance",
                note.key,
                note.onset,
                SNAP_TOLERANCE * 1000,
            )
            continue
        # offsets sort before onsets at equal instants
        events.append((onset, 1, note.key))
        events.append((offset, 0, note.key))
    if not events:
        raise ScoreValidationError("empty score")
    events.sort()

    spans: list[tuple[frozenset[NoteKey], float, float]] = []
    sounding: Counter[NoteKey] = Counter()
    current_time = 0.0
    for time, is_onset, key in events:
        if time > current_time:
            active = frozenset(key for key, count in sounding.items() if count > 0)
            if spans and spans[-1][0] == active:
                spans[-1] = (active, spans[-1][1], time)
            else:
                spans.append((active, current_time, time))
            current_time = time
        if is_onset:
            sounding[key] += 1
        else:
            sounding[key] -= 1

    units = tuple(
        ScoreUnit(index=k, notes=active, span_start=start, span_end=end)
        for k, (active, start, end) in enumerate(spans)
    )
    timeline = ScoreTimeline(units=units, total_duration=current_time)
    logger.debug(
        "Built timeline: %d units, %d silence, %.3fs",
        len(units),
        sum(unit.is_silence for unit in units),
        current_time,
    )
    return timeline


def unit_union(timeline: ScoreTimeline, k: int) -> frozenset[NoteKey]:
    """Notes of unit k together with those of unit k+1.

    The last unit's union is its own note set.

    Raises:
        IndexError: If k is outside [0, K)
    """
    if not 0 <= k < len(timeline):
        raise IndexError(f"unit index {k} out of range [0, {len(timeline)})")
    if k == len(timeline) - 1:
        return timeline[k].notes
    return timeline[k].notes | timeline[k + 1].notes


def notes_from_timeline(timeline: ScoreTimeline) -> list[Note]:
    """Reconstruct one note per (unit, note) pair from a timeline's spans."""
    return [
        Note(pitch=pitch, instrument=instrument, onset=unit.span_start, offset=unit.span_end)
        for unit in timeline.units
        for pitch, instrument in sorted(unit.notes)
    ]
