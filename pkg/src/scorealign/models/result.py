"""Pipeline result entities.

- AlignmentStatus: state of a pipeline run
- PipelineIssue: problem met by one stage, fatal or not
- AlignmentResult: everything one alignment run produced
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from scorealign.models.alignment import AlignmentPath, DecompositionTable, DistortionMatrix
from scorealign.models.patterns import UnitPattern
from scorealign.models.score import ScoreTimeline


class AlignmentStatus(Enum):
    """Status of a pipeline run."""

    PENDING = "pending"
    RUNNING = "running"
    COMPLETED = "completed"
    FAILED = "failed"


@dataclass
class PipelineIssue:
    """Problem encountered by a pipeline stage.

    Attributes:
        stage: Stage that reported it (frontend, patterns, distortion, dtw)
        message: Description
        recoverable: Whether the run continued
        error: Exception that stopped the run, for non-recoverable issues
    """

    stage: str
    message: str
    recoverable: bool = True
    error: Exception | None = field(default=None, repr=False, compare=False)

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary for serialization."""
        return {"stage": self.stage, "message": self.message, "recoverable": self.recoverable}


@dataclass
class AlignmentResult:
    """Output of one alignment run.

    Attributes:
        status: Final state
        timeline: Score units (None when the run started from a stored matrix)
        patterns: Unit patterns used for the matrix
        matrix: Distortion matrix
        decomposition: Frame decompositions (kept only on request)
        path: DTW path
        onsets: Unit onset seconds
        issues: Problems met along the way
        timings: Elapsed seconds per stage
    """

    status: AlignmentStatus = AlignmentStatus.PENDING
    timeline: ScoreTimeline | None = None
    patterns: list[UnitPattern] = field(default_factory=list)
    matrix: DistortionMatrix | None = None
    decomposition: DecompositionTable | None = None
    path: AlignmentPath | None = None
    onsets: dict[int, float] = field(default_factory=dict)
    issues: list[PipelineIssue] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)

    def add_issue(self, issue: PipelineIssue) -> None:
        """Record an issue."""
        self.issues.append(issue)

    def has_errors(self) -> bool:
        """Check whether a non-recoverable issue was recorded."""
        return any(not issue.recoverable for issue in self.issues)

    def raise_for_status(self) -> None:
        """Re-raise the exception that failed the run, if any."""
        for issue in self.issues:
            if not issue.recoverable and issue.error is not None:
                raise issue.error

    def to_dict(self) -> dict[str, Any]:
        """Alignment output JSON (issues are reported through logging)."""
        if self.path is None:
            return {"onsets": [], "total_cost": None, "path_length": 0}
        return self.path.to_dict()
