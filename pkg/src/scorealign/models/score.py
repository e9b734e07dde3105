"""Score entities.

- Note: one score event (pitch, instrument, onset, offset)
- ScoreUnit: a maximal span with a constant set of sounding notes
- ScoreTimeline: the ordered units tiling [0, total_duration]; the k axis
"""

from dataclasses import dataclass, field
from typing import Any

from scorealign.errors import ScoreValidationError

# (pitch, instrument)
NoteKey = tuple[int, str]

MIN_PITCH = 21
MAX_PITCH = 108

# Spans are compared with this absolute slack (seconds) for float round-off
SPAN_EPSILON = 1e-9


def sorted_keys(keys: frozenset[NoteKey] | set[NoteKey]) -> list[NoteKey]:
    """Return note keys in canonical (pitch, instrument) order."""
    return sorted(keys)


@dataclass(frozen=True)
class Note:
    """A single score event.

    Attributes:
        pitch: MIDI note number (21-108)
        instrument: Instrument identifier
        onset: Start time in seconds
        offset: End time in seconds (> onset)
    """

    pitch: int
    instrument: str
    onset: float
    offset: float

    def __post_init__(self) -> None:
        """Validate note invariants."""
        if not MIN_PITCH <= self.pitch <= MAX_PITCH:
            raise ScoreValidationError(
                f"pitch {self.pitch} outside [{MIN_PITCH}, {MAX_PITCH}]"
            )
        if self.onset < 0:
            raise ScoreValidationError(f"negative onset {self.onset}")
        if self.offset <= self.onset:
            raise ScoreValidationError(
                f"offset {self.offset} must be greater than onset {self.onset}"
            )

    @property
    def key(self) -> NoteKey:
        """Return the (pitch, instrument) identity of this note."""
        return (self.pitch, self.instrument)

    def to_dict(self) -> dict[str, Any]:
        """Convert to the score JSON event shape."""
        return {
            "pitch": self.pitch,
            "instrument": self.instrument,
            "onset": self.onset,
            "offset": self.offset,
        }


@dataclass(frozen=True)
class ScoreUnit:
    """A score unit: the notes sounding together over one span.

    An empty note set is a silence unit.

    Attributes:
        index: Unit ordinal k (0-based)
        notes: Set of (pitch, instrument) pairs
        span_start: Span start in seconds
        span_end: Span end in seconds
    """

    index: int
    notes: frozenset[NoteKey]
    span_start: float
    span_end: float

    def __post_init__(self) -> None:
        """Validate span ordering."""
        if self.span_end <= self.span_start:
            raise ScoreValidationError(
                f"unit {self.index} has empty span [{self.span_start}, {self.span_end})"
            )

    @property
    def is_silence(self) -> bool:
        """True when no note sounds during this unit."""
        return not self.notes

    @property
    def duration(self) -> float:
        """Span length in seconds."""
        return self.span_end - self.span_start

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary for serialization."""
        return {
            "k": self.index,
            "notes": [[pitch, instrument] for pitch, instrument in sorted_keys(self.notes)],
            "span_start": self.span_start,
            "span_end": self.span_end,
        }


@dataclass(frozen=True)
class ScoreTimeline:
    """Ordered score units tiling [0, total_duration].

    Attributes:
        units: Units in score order
        total_duration: End of the last unit in seconds
    """

    units: tuple[ScoreUnit, ...]
    total_duration: float = field(default=0.0)

    def __post_init__(self) -> None:
        """Validate the tiling and adjacency invariants."""
        if not self.units:
            raise ScoreValidationError("timeline has no units")
        if abs(self.units[0].span_start) > SPAN_EPSILON:
            raise ScoreValidationError("first unit must start at 0")
        if abs(self.units[-1].span_end - self.total_duration) > SPAN_EPSILON:
            raise ScoreValidationError("last unit must end at total_duration")
        for position, (left, right) in enumerate(zip(self.units, self.units[1:], strict=False)):
            if left.index != position or right.index != position + 1:
                raise ScoreValidationError(f"unit indices out of order at {position}")
            if abs(left.span_end - right.span_start) > SPAN_EPSILON:
                raise ScoreValidationError(f"gap or overlap between units {position} and {position + 1}")
            if left.notes == right.notes:
                raise ScoreValidationError(f"units {position} and {position + 1} share a note set")

    def __len__(self) -> int:
        return len(self.units)

    def __getitem__(self, k: int) -> ScoreUnit:
        return self.units[k]

    @property
    def all_notes(self) -> frozenset[NoteKey]:
        """Every (pitch, instrument) pair used anywhere in the score."""
        return frozenset().union(*(unit.notes for unit in self.units))

    def unit_at(self, time_s: float) -> ScoreUnit:
        """Return the unit whose half-open span contains ``time_s``.

        Times at or beyond total_duration belong to the last unit; negative
        times belong to the first.
        """
        lo, hi = 0, len(self.units) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.units[mid].span_start <= time_s:
                lo = mid
            else:
                hi = mid - 1
        return self.units[lo]

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary for serialization."""
        return {
            "total_duration": self.total_duration,
            "units": [unit.to_dict() for unit in self.units],
        }
