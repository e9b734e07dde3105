"""Unit tests for configuration system."""

from pathlib import Path

import pytest
import yaml

from scorealign.config import (
    RunConfig,
    apply_overrides,
    create_default_config,
    find_config_file,
    load_config,
    load_config_from_dict,
    substitute_env_vars,
)
from scorealign.errors import ConfigError
from scorealign.models.spectral import FrontendConfig


class TestSubstituteEnvVars:
    """Tests for environment variable substitution."""

    def test_substitute_string(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test substituting env var in string."""
        monkeypatch.setenv("BANK_DIR", "/data/banks")

        result = substitute_env_vars("${BANK_DIR}/piano.json")

        assert result == "/data/banks/piano.json"

    def test_substitute_nested(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test substituting env vars inside dicts and lists."""
        monkeypatch.setenv("THREADS", "4")

        result = substitute_env_vars({"runtime": {"threads": "${THREADS}"}, "list": ["${THREADS}", 1]})

        assert result == {"runtime": {"threads": "4"}, "list": ["4", 1]}

    def test_missing_env_var_raises(self) -> None:
        """Test that a missing env var is a configuration error."""
        with pytest.raises(ConfigError, match="environment variable not set"):
            substitute_env_vars("${SCOREALIGN_TEST_UNSET_VAR}")

    def test_passthrough_non_string(self) -> None:
        """Test that numbers and booleans pass through."""
        assert substitute_env_vars(42) == 42
        assert substitute_env_vars(True) is True


class TestLoadConfigFromDict:
    """Tests for building RunConfig from a mapping."""

    def test_defaults(self) -> None:
        """Test that an empty mapping gives the defaults."""
        config = load_config_from_dict({})

        assert config.frontend == FrontendConfig()
        assert config.training.iterations == 100
        assert config.distortion.kind == "novel"
        assert config.dtw.band is None
        assert config.runtime.threads == 1

    def test_sections(self) -> None:
        """Test values in every section."""
        config = load_config_from_dict(
            {
                "frontend": {"sample_rate": 8000, "fft_size": 512, "hop_size": 128},
                "training": {"beta": 1.0, "iterations": 50},
                "decomposition": {"nonnegative": False},
                "distortion": {"kind": "baseline", "beta": 1.5},
                "dtw": {"allow_skip": True, "band": 40},
                "paths": {"bank": "bank.json"},
                "runtime": {"threads": 2, "seed": 9},
            }
        )

        assert config.frontend.n_bins == 257
        assert config.frontend.window == "hann"
        assert (config.training.beta, config.training.iterations) == (1.0, 50)
        assert config.decomposition.nonnegative is False
        assert config.distortion.kind == "baseline"
        assert config.dtw.band == 40
        assert config.paths.bank == "bank.json"
        assert config.runtime.seed == 9

    def test_env_strings_coerced(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test that substituted strings become typed values."""
        monkeypatch.setenv("SKIP", "yes")
        monkeypatch.setenv("BETA", "1")

        config = load_config_from_dict({"dtw": {"allow_skip": "${SKIP}"}, "distortion": {"beta": "${BETA}"}})

        assert config.dtw.allow_skip is True
        assert config.distortion.beta == 1.0

    def test_unknown_section(self) -> None:
        """Test that unknown sections are rejected."""
        with pytest.raises(ConfigError, match="unknown section"):
            load_config_from_dict({"llm": {}})

    def test_unknown_key(self) -> None:
        """Test that unknown keys name their section."""
        with pytest.raises(ConfigError, match="dtw.width"):
            load_config_from_dict({"dtw": {"width": 3}})

    def test_unknown_frontend_key(self) -> None:
        """Test that unknown frontend keys are rejected."""
        with pytest.raises(ConfigError, match="frontend.fft"):
            load_config_from_dict({"frontend": {"fft": 512}})

    @pytest.mark.parametrize(
        ("data", "key"),
        [
            ({"training": {"beta": 0}}, "training.beta"),
            ({"distortion": {"beta": 0.0}}, "distortion.beta"),
            ({"distortion": {"kind": "chroma"}}, "distortion.kind"),
            ({"distortion": {"alpha_scaling": "loud"}}, "distortion.alpha_scaling"),
            ({"dtw": {"band": 0}}, "dtw.band"),
            ({"runtime": {"threads": 0}}, "runtime.threads"),
            ({"training": {"iterations": 2.5}}, "training.iterations"),
            ({"dtw": {"allow_skip": "maybe"}}, "dtw.allow_skip"),
        ],
    )
    def test_invalid_values(self, data: dict, key: str) -> None:
        """Test that invalid values name the offending key."""
        with pytest.raises(ConfigError, match=key):
            load_config_from_dict(data)

    def test_bad_fft_size(self) -> None:
        """Test that frontend validation surfaces as ConfigError."""
        with pytest.raises(ConfigError):
            load_config_from_dict({"frontend": {"fft_size": 1000}})

    def test_base_not_mutated(self) -> None:
        """Test that layering on a base leaves the base untouched."""
        base = load_config_from_dict({"runtime": {"threads": 3}})

        layered = load_config_from_dict({"runtime": {"seed": 5}}, base=base)

        assert layered.runtime.threads == 3
        assert layered.runtime.seed == 5
        assert base.runtime.seed == 0


class TestApplyOverrides:
    """Tests for dotted-key CLI overrides."""

    def test_overrides(self) -> None:
        """Test that overrides replace single keys."""
        config = apply_overrides(RunConfig(), {"distortion.beta": 1.0, "dtw.allow_skip": True})

        assert config.distortion.beta == 1.0
        assert config.dtw.allow_skip is True
        assert config.distortion.kind == "novel"

    def test_none_values_skipped(self) -> None:
        """Test that unset CLI options leave the config alone."""
        config = RunConfig()

        assert apply_overrides(config, {"dtw.band": None}) is config

    def test_invalid_override(self) -> None:
        """Test that overrides are validated like file values."""
        with pytest.raises(ConfigError, match="dtw.band"):
            apply_overrides(RunConfig(), {"dtw.band": -1})


class TestDistortionSettings:
    """Tests for deriving measure options."""

    def test_settings_follow_config(self) -> None:
        """Test the mapping from config sections to measure options."""
        config = load_config_from_dict(
            {
                "distortion": {"alpha_scaling": "raw", "squared_distance": True, "beta": 1.0},
                "decomposition": {"nonnegative": False},
                "runtime": {"threads": 2},
            }
        )

        settings = config.distortion_settings()

        assert settings.normalized_alphas is False
        assert settings.squared_distance is True
        assert settings.nonnegative is False
        assert settings.beta == 1.0
        assert settings.threads == 2


class TestConfigFiles:
    """Tests for discovery and YAML loading."""

    def test_find_hidden_dir_first(self, tmp_path: Path) -> None:
        """Test that .scorealign/config.yaml wins over scorealign.yaml."""
        (tmp_path / ".scorealign").mkdir()
        (tmp_path / ".scorealign" / "config.yaml").write_text("{}")
        (tmp_path / "scorealign.yaml").write_text("{}")

        assert find_config_file(tmp_path) == (tmp_path / ".scorealign" / "config.yaml").resolve()

    def test_find_none(self, tmp_path: Path) -> None:
        """Test that no config file gives None."""
        assert find_config_file(tmp_path) is None

    def test_load_explicit(self, tmp_path: Path) -> None:
        """Test loading an explicit file records its path."""
        path = tmp_path / "custom.yaml"
        path.write_text(yaml.safe_dump({"dtw": {"band": 12}}))

        config = load_config(path)

        assert config.dtw.band == 12
        assert config.config_path == path

    def test_load_missing_explicit(self, tmp_path: Path) -> None:
        """Test that a missing explicit file raises."""
        with pytest.raises(FileNotFoundError):
            load_config(tmp_path / "absent.yaml")

    def test_invalid_yaml(self, tmp_path: Path) -> None:
        """Test that broken YAML is a configuration error."""
        path = tmp_path / "broken.yaml"
        path.write_text("dtw: [unclosed")

        with pytest.raises(ConfigError, match="invalid YAML"):
            load_config(path)

    def test_invalid_utf8(self, tmp_path: Path) -> None:
        """Test that a config file that is not UTF-8 is a configuration error."""
        path = tmp_path / "latin.yaml"
        path.write_bytes(b"paths:\n  bank: caf\xe9.json\n")

        with pytest.raises(ConfigError, match="UTF-8"):
            load_config(path)

    def test_auto_discover(self, tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test discovery from the working directory."""
        (tmp_path / "scorealign.yaml").write_text(yaml.safe_dump({"runtime": {"seed": 4}}))
        monkeypatch.chdir(tmp_path)

        assert load_config().runtime.seed == 4

    def test_default_config_loads(self) -> None:
        """Test that the generated default file parses back to the defaults."""
        config = load_config_from_dict(yaml.safe_load(create_default_config()))

        assert config.to_dict() == RunConfig().to_dict()
