"""JSON documents and CSV exports.

- bank: {"config": {...}, "templates": [{"pitch", "instrument", "spectrum"}]}
- patterns: {"units": [{"k", "alphas": [{"pitch", "instrument", "alpha"}], "basis"}]}
- alignment: {"onsets": [{"k", "time_s"}], "total_cost", "path_length"}
- ground truth: {"onsets": [{"k", "time_s"}]}
- CSV: matrix (k,t,value), path (k,t), coefficients (k,t,pitch,instrument,a)
"""

import csv
import json
from pathlib import Path
from typing import Any

from scorealign.errors import FormatError, ValidationError
from scorealign.models.alignment import AlignmentPath, DecompositionTable, DistortionMatrix
from scorealign.models.bank import TemplateBank
from scorealign.models.patterns import UnitPattern


def read_json(path: Path) -> Any:
    """Parse a UTF-8 JSON file, reporting the line of a syntax error."""
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except UnicodeDecodeError as e:
        raise FormatError(str(path), f"not valid UTF-8 at byte {e.start}") from e
    except json.JSONDecodeError as e:
        raise FormatError(str(path), f"invalid JSON at line {e.lineno}: {e.msg}") from e


def write_json(data: Any, path: Path) -> None:
    """Write indented JSON with a trailing newline."""
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(data) + "\n", encoding="utf-8")


def dumps(data: Any) -> str:
    """Serialize to the stable JSON layout used on stdout and in files."""
    return json.dumps(data, indent=2)


def save_bank(bank: TemplateBank, path: Path) -> None:
    write_json(bank.to_dict(), path)


def load_bank(path: Path) -> TemplateBank:
    """Read a bank JSON file.

    Raises:
        FormatError: On malformed JSON or missing fields
    """
    data = read_json(path)
    if not isinstance(data, dict):
        raise FormatError(str(path), "bank document must be an object")
    try:
        return TemplateBank.from_dict(data)
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(str(path), f"malformed template entry: {e}") from e


def save_patterns(patterns: list[UnitPattern], path: Path) -> None:
    write_json({"units": [pattern.to_dict() for pattern in patterns]}, path)


def load_patterns(path: Path, bank: TemplateBank) -> list[UnitPattern]:
    """Read a patterns JSON file, checking each basis against the bank.

    Raises:
        FormatError: On malformed JSON or missing fields
        ValidationError: If unit indices are not 0..K-1 in order
    """
    data = read_json(path)
    units = data.get("units") if isinstance(data, dict) else None
    if not isinstance(units, list):
        raise FormatError(str(path), "patterns document needs a 'units' list")
    try:
        patterns = [UnitPattern.from_dict(entry, bank) for entry in units]
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(str(path), f"malformed pattern entry: {e}") from e
    for k, pattern in enumerate(patterns):
        if pattern.unit_index != k:
            raise ValidationError(f"{path}: pattern {k} has unit index {pattern.unit_index}")
    return patterns


def onsets_document(onsets: dict[int, float]) -> dict[str, Any]:
    return {"onsets": [{"k": k, "time_s": onsets[k]} for k in sorted(onsets)]}


def load_onsets(path: Path) -> dict[int, float]:
    """Read the onsets of an alignment or ground-truth JSON file."""
    data = read_json(path)
    entries = data.get("onsets") if isinstance(data, dict) else None
    if not isinstance(entries, list):
        raise FormatError(str(path), "document needs an 'onsets' list")
    try:
        return {int(entry["k"]): float(entry["time_s"]) for entry in entries}
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(str(path), f"malformed onset entry: {e}") from e


def save_alignment(path_result: AlignmentPath, path: Path) -> None:
    write_json(path_result.to_dict(), path)


def write_matrix_csv(matrix: DistortionMatrix, path: Path) -> None:
    """Long-format CSV k,t,value."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["k", "t", "value"])
        for k, row in enumerate(matrix.values):
            writer.writerows((k, t, repr(float(value))) for t, value in enumerate(row))


def write_path_csv(path_result: AlignmentPath, path: Path) -> None:
    """CSV k,t with one row per frame."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["k", "t"])
        writer.writerows(path_result.steps)


def write_coeffs_csv(table: DecompositionTable, path: Path) -> None:
    """CSV k,t,pitch,instrument,a; silent frames are omitted."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["k", "t", "pitch", "instrument", "a"])
        for k, row in enumerate(table.rows):
            for t in range(row.coeffs.shape[0]):
                if table.silent[t]:
                    continue
                for i, (pitch, instrument) in enumerate(row.keys):
                    writer.writerow([k, t, pitch, instrument, repr(float(row.coeffs[t, i]))])
