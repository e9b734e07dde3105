"""Corpus manifest reading and writing.

A manifest lists reproducible synthetic cases:

    {"cases": [{"name": "c0", "score": "scores/a.json",
                "segments": [{"duration": 2.0, "slope": 1.2}, ...],
                "seed": 3, "noise": 0.05}]}

"warp" (breakpoint list) may be given instead of "segments"; neither means identity.
Relative score paths are resolved against the manifest directory.
"""

from pathlib import Path
from typing import Any

from scorealign.errors import FormatError, ValidationError
from scorealign.formats.documents import read_json, write_json
from scorealign.models.evaluation import CorpusCase, WarpMap

CASE_KEYS = {"name", "score", "warp", "segments", "seed", "noise"}


def _parse_warp(entry: dict[str, Any]) -> WarpMap:
    if "warp" in entry and "segments" in entry:
        raise ValidationError("give either warp or segments, not both")
    if "warp" in entry:
        return WarpMap.from_list(entry["warp"])
    if "segments" in entry:
        segments = entry["segments"]
        if not isinstance(segments, list):
            raise ValidationError("segments must be a list")
        try:
            durations = [float(s["duration"]) for s in segments]
            slopes = [float(s["slope"]) for s in segments]
        except (KeyError, TypeError, ValueError) as e:
            raise ValidationError(f"malformed warp segment: {e}") from e
        return WarpMap.from_segments(durations, slopes)
    return WarpMap.identity()


def parse_case(entry: Any, index: int, base_dir: Path) -> CorpusCase:
    """Build one CorpusCase from its manifest entry."""
    if not isinstance(entry, dict):
        raise ValidationError(f"case {index} is not an object")
    unknown = set(entry) - CASE_KEYS
    if unknown:
        raise ValidationError(f"case {index}: unknown keys {sorted(unknown)}")
    if "score" not in entry:
        raise ValidationError(f"case {index}: missing score path")
    try:
        seed = int(entry.get("seed", 0))
        noise = float(entry.get("noise", 0.0))
    except (TypeError, ValueError) as e:
        raise ValidationError(f"case {index}: {e}") from e
    score = Path(str(entry["score"]))
    if not score.is_absolute():
        score = base_dir / score
    return CorpusCase(
        name=str(entry.get("name", f"case{index:03d}")),
        score=str(score),
        warp=_parse_warp(entry),
        seed=seed,
        noise=noise,
    )


def load_manifest(path: Path) -> list[CorpusCase]:
    """Read a corpus manifest.

    Raises:
        FormatError: If the file is not JSON
        ValidationError: If a case is malformed or the manifest is empty
    """
    data = read_json(path)
    cases = data.get("cases") if isinstance(data, dict) else None
    if not isinstance(cases, list) or not cases:
        raise FormatError(str(path), "manifest needs a non-empty 'cases' list")
    parsed = [parse_case(entry, i, path.parent) for i, entry in enumerate(cases)]
    names = [case.name for case in parsed]
    if len(set(names)) != len(names):
        raise ValidationError("case names must be unique")
    return parsed


def save_manifest(cases: list[CorpusCase], path: Path) -> None:
    """Write cases as a manifest (warps as breakpoint lists)."""
    write_json({"cases": [case.to_dict() for case in cases]}, path)
