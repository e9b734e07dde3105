"""Unit tests for malformed JSON documents surfacing as format errors."""

import json
from pathlib import Path

import numpy as np
import pytest

from scorealign.errors import FormatError
from scorealign.evaluation.manifest import load_manifest
from scorealign.formats.documents import load_bank, load_patterns, read_json, save_bank, save_patterns
from scorealign.models.patterns import UnitPattern
from tests.fixtures import TINY_CONFIG, one_hot_bank

PITCHES = [60, 62, 64]


def _patterns_document(path: Path) -> dict:
    bank = one_hot_bank(PITCHES)
    pattern = UnitPattern(0, {(60, "piano"): 0.6}, np.zeros(TINY_CONFIG.n_bins))
    pattern.basis, pattern.composite_norm = pattern.recompute_basis(bank)
    save_patterns([pattern], path)
    return json.loads(path.read_text(encoding="utf-8"))


class TestReadJson:
    """Tests for decoding failures in JSON files."""

    def test_invalid_utf8(self, tmp_path: Path) -> None:
        """Test that bytes that are not UTF-8 raise a format error naming the encoding."""
        path = tmp_path / "bad.json"
        path.write_bytes(b'{"a": "\xff"}')

        with pytest.raises(FormatError, match="UTF-8"):
            read_json(path)

    def test_manifest_invalid_utf8(self, tmp_path: Path) -> None:
        """Test that a manifest with invalid UTF-8 is a format error."""
        path = tmp_path / "corpus.json"
        path.write_bytes(b'{"cases": [{"score": "\xfe\xff.json"}]}')

        with pytest.raises(FormatError, match="UTF-8"):
            load_manifest(path)

    def test_manifest_syntax_error(self, tmp_path: Path) -> None:
        """Test that a manifest with a syntax error reports its line."""
        path = tmp_path / "corpus.json"
        path.write_text('{\n  "cases": [\n  oops\n]}', encoding="utf-8")

        with pytest.raises(FormatError, match="line 3"):
            load_manifest(path)


class TestMalformedEntries:
    """Tests for wrongly typed values inside bank and pattern documents."""

    def test_non_numeric_alpha(self, tmp_path: Path) -> None:
        """Test that a textual gain is a malformed pattern entry."""
        path = tmp_path / "patterns.json"
        document = _patterns_document(path)
        document["units"][0]["alphas"][0]["alpha"] = "loud"
        path.write_text(json.dumps(document), encoding="utf-8")

        with pytest.raises(FormatError, match="malformed pattern entry"):
            load_patterns(path, one_hot_bank(PITCHES))

    def test_non_numeric_basis(self, tmp_path: Path) -> None:
        """Test that a basis holding text is a malformed pattern entry."""
        path = tmp_path / "patterns.json"
        document = _patterns_document(path)
        document["units"][0]["basis"][0] = "x"
        path.write_text(json.dumps(document), encoding="utf-8")

        with pytest.raises(FormatError, match="malformed pattern entry"):
            load_patterns(path, one_hot_bank(PITCHES))

    def test_non_numeric_spectrum(self, tmp_path: Path) -> None:
        """Test that a template spectrum holding text is a malformed template entry."""
        path = tmp_path / "bank.json"
        save_bank(one_hot_bank(PITCHES), path)
        document = json.loads(path.read_text(encoding="utf-8"))
        document["templates"][0]["spectrum"][0] = "x"
        path.write_text(json.dumps(document), encoding="utf-8")

        with pytest.raises(FormatError, match="malformed template entry"):
            load_bank(path)

