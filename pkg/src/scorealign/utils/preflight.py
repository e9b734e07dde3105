"""Preflight validation of alignment inputs.

Every input is checked before any computation starts, and all failures are
reported together. A failed required check aborts the run: no partial results.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import soundfile as sf

from scorealign.analyzers.score_units import build_timeline, load_score
from scorealign.errors import ScoreAlignError, ValidationError
from scorealign.models.bank import TemplateBank
from scorealign.models.patterns import UnitPattern
from scorealign.models.score import ScoreTimeline
from scorealign.models.spectral import FrontendConfig


@dataclass
class InputCheck:
    """Result of checking a single input.

    Attributes:
        name: Check identifier
        passed: Whether the check succeeded
        required: Whether a failure aborts the run
        message: Human-readable context
    """

    name: str
    passed: bool
    required: bool = True
    message: str = ""


@dataclass
class PreflightResult:
    """Result of preflight validation.

    Attributes:
        success: Whether all required checks passed
        checks: Individual check results
        errors: Messages for failed required checks
        warnings: Messages for failed optional checks
        timeline: Score units, when the score parsed
    """

    success: bool = True
    checks: list[InputCheck] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    timeline: ScoreTimeline | None = None

    def add_check(self, check: InputCheck) -> None:
        """Add a check result."""
        self.checks.append(check)
        if not check.passed:
            if check.required:
                self.success = False
                self.errors.append(f"{check.name}: {check.message}")
            else:
                self.warnings.append(f"{check.name}: {check.message}")

    def raise_on_failure(self) -> None:
        """Raise one ValidationError listing every failed required check."""
        if not self.success:
            raise ValidationError("preflight failed:\n  " + "\n  ".join(self.errors))

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary for JSON output."""
        return {
            "success": self.success,
            "checks": [
                {"name": c.name, "passed": c.passed, "required": c.required, "message": c.message}
                for c in self.checks
            ],
            "errors": self.errors,
            "warnings": self.warnings,
        }


class PreflightChecker:
    """Validates the inputs of an alignment run against the run config."""

    def __init__(self, config: FrontendConfig) -> None:
        """Initialize the checker.

        Args:
            config: Frontend config of the run
        """
        self.config = config

    def check_score(self, path: Path, result: PreflightResult) -> None:
        """The score parses and yields a timeline."""
        try:
            result.timeline = build_timeline(load_score(path))
        except (ScoreAlignError, OSError) as e:
            result.add_check(InputCheck(name="score", passed=False, message=str(e)))
            return
        result.add_check(
            InputCheck(name="score", passed=True, message=f"{len(result.timeline)} units")
        )

    def check_bank(self, bank: TemplateBank, result: PreflightResult) -> None:
        """The bank shares the run config and covers every note of the score."""
        same_config = bank.config == self.config
        result.add_check(
            InputCheck(
                name="bank_config",
                passed=same_config,
                message="" if same_config else f"bank {bank.config} != run {self.config}",
            )
        )
        if result.timeline is None:
            return
        missing = bank.missing(result.timeline.all_notes)
        result.add_check(
            InputCheck(
                name="bank_coverage",
                passed=not missing,
                message=", ".join(f"template missing: {key}" for key in missing),
            )
        )

    def check_patterns(self, patterns: list[UnitPattern], result: PreflightResult) -> None:
        """The patterns file has one pattern per unit, with the unit's notes."""
        if result.timeline is None:
            return
        timeline = result.timeline
        if len(patterns) != len(timeline):
            result.add_check(
                InputCheck(
                    name="patterns",
                    passed=False,
                    message=f"{len(patterns)} patterns for {len(timeline)} score units",
                )
            )
            return
        mismatched = [
            p.unit_index for p, unit in zip(patterns, timeline.units, strict=True) if set(p.alphas) != set(unit.notes)
        ]
        result.add_check(
            InputCheck(
                name="patterns",
                passed=not mismatched,
                message=f"note sets differ for units {mismatched}" if mismatched else "",
            )
        )

    def check_audio(self, path: Path, result: PreflightResult) -> None:
        """The WAV input exists and has the configured sample rate."""
        try:
            info = sf.info(str(path))
        except (RuntimeError, OSError) as e:
            result.add_check(InputCheck(name="audio", passed=False, message=f"{path}: {e}"))
            return
        passed = info.samplerate == self.config.sample_rate
        result.add_check(
            InputCheck(
                name="audio",
                passed=passed,
                message=""
                if passed
                else f"sample rate {info.samplerate} Hz differs from configured {self.config.sample_rate} Hz",
            )
        )

    def run(
        self,
        score: Path,
        bank: TemplateBank,
        patterns: list[UnitPattern] | None = None,
        audio: Path | None = None,
    ) -> PreflightResult:
        """Run every applicable check.

        Args:
            score: Score JSON path
            bank: Loaded template bank
            patterns: Loaded patterns, if supplied
            audio: WAV input, if the performance is audio
        """
        result = PreflightResult()
        self.check_score(score, result)
        self.check_bank(bank, result)
        if patterns is not None:
            self.check_patterns(patterns, result)
        if audio is not None:
            self.check_audio(audio, result)
        return result
