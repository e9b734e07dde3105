"""Scorealign configuration system.

Configuration is YAML-based; CLI flags override individual keys per run.
Supports environment variable substitution (${VAR}) in config values.

Configuration file discovery (in priority order):
1. CLI --config argument
2. ./.scorealign/config.yaml
3. ./scorealign.yaml
"""

import copy
import os
import re
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any

import yaml

from scorealign.analyzers.base import DistortionSettings
from scorealign.errors import ConfigError
from scorealign.models.alignment import DistortionKind
from scorealign.models.spectral import FrontendConfig

# =============================================================================
# Configuration Dataclasses
# =============================================================================


@dataclass
class TrainingConfig:
    """Pattern training configuration.

    Attributes:
        beta: Beta-divergence of the multiplicative updates
        iterations: Maximum update rounds per unit
        tolerance: Relative improvement below which fitting stops
        render_duration_s: Length of each unit render
    """

    beta: float = 2.0
    iterations: int = 100
    tolerance: float = 1e-5
    render_duration_s: float = 1.0

    def __post_init__(self) -> None:
        """Validate training configuration."""
        if self.beta == 0:
            raise ConfigError("training.beta", "beta = 0 (Itakura-Saito) is not supported")
        if self.iterations < 1:
            raise ConfigError("training.iterations", f"must be >= 1 (got {self.iterations})")
        if self.tolerance < 0:
            raise ConfigError("training.tolerance", f"must be >= 0 (got {self.tolerance})")
        if self.render_duration_s <= 0:
            raise ConfigError(
                "training.render_duration_s", f"must be positive (got {self.render_duration_s})"
            )


@dataclass
class DecompositionConfig:
    """Frame decomposition configuration.

    Attributes:
        nonnegative: Constrain coefficients to a >= 0 (false = plain least squares)
    """

    nonnegative: bool = True


@dataclass
class DistortionConfig:
    """Distortion measure configuration.

    Attributes:
        kind: Registered measure name (novel, baseline)
        beta: Beta-divergence of the baseline measure
        alpha_scaling: "normalized" (unit-norm composite) or "raw" alphas
        squared_distance: Use the squared coefficient distance in the novel measure
    """

    kind: str = DistortionKind.NOVEL.value
    beta: float = 2.0
    alpha_scaling: str = "normalized"
    squared_distance: bool = False

    def __post_init__(self) -> None:
        """Validate distortion configuration."""
        valid_kinds = {kind.value for kind in DistortionKind}
        if self.kind not in valid_kinds:
            raise ConfigError("distortion.kind", f"{self.kind!r} not in {sorted(valid_kinds)}")
        if self.beta == 0:
            raise ConfigError("distortion.beta", "beta = 0 (Itakura-Saito) is not supported")
        if self.alpha_scaling not in {"normalized", "raw"}:
            raise ConfigError(
                "distortion.alpha_scaling", f"{self.alpha_scaling!r} not in ['normalized', 'raw']"
            )


@dataclass
class DTWConfig:
    """DTW configuration.

    Attributes:
        allow_skip: Permit skipping one unit per frame
        band: Sakoe-Chiba half-width in frames (None = unconstrained)
    """

    allow_skip: bool = False
    band: int | None = None

    def __post_init__(self) -> None:
        """Validate DTW configuration."""
        if self.band is not None and self.band < 1:
            raise ConfigError("dtw.band", f"must be >= 1 frame or null (got {self.band})")


@dataclass
class PathsConfig:
    """Default file locations.

    Attributes:
        bank: Template bank JSON
        patterns: Patterns JSON
        output: Directory for generated files
    """

    bank: str | None = None
    patterns: str | None = None
    output: str = "."


@dataclass
class RuntimeConfig:
    """Runtime configuration.

    Attributes:
        threads: Worker threads for decomposition, distortion and training
        seed: Default noise seed for synthesis
    """

    threads: int = 1
    seed: int = 0

    def __post_init__(self) -> None:
        """Validate runtime configuration."""
        if self.threads < 1:
            raise ConfigError("runtime.threads", f"must be >= 1 (got {self.threads})")


@dataclass
class RunConfig:
    """Top-level Scorealign configuration.

    Attributes:
        frontend: STFT analysis parameters
        training: Pattern training
        decomposition: Frame decomposition
        distortion: Distortion measure
        dtw: Path search
        paths: Default file locations
        runtime: Threads and seed
    """

    frontend: FrontendConfig = field(default_factory=FrontendConfig)
    training: TrainingConfig = field(default_factory=TrainingConfig)
    decomposition: DecompositionConfig = field(default_factory=DecompositionConfig)
    distortion: DistortionConfig = field(default_factory=DistortionConfig)
    dtw: DTWConfig = field(default_factory=DTWConfig)
    paths: PathsConfig = field(default_factory=PathsConfig)
    runtime: RuntimeConfig = field(default_factory=RuntimeConfig)

    # Runtime overrides (set by CLI)
    _config_path: Path | None = field(default=None, repr=False)

    @property
    def config_path(self) -> Path | None:
        """Get the path to the config file that was loaded."""
        return self._config_path

    def distortion_settings(self) -> DistortionSettings:
        """Options for the distortion measures."""
        return DistortionSettings(
            beta=self.distortion.beta,
            normalized_alphas=self.distortion.alpha_scaling == "normalized",
            squared_distance=self.distortion.squared_distance,
            nonnegative=self.decomposition.nonnegative,
            threads=self.runtime.threads,
        )

    def to_dict(self) -> dict[str, Any]:
        """Convert to a plain dictionary (same layout as the YAML file)."""
        return {
            "frontend": self.frontend.to_dict(),
            "training": _section_dict(self.training),
            "decomposition": _section_dict(self.decomposition),
            "distortion": _section_dict(self.distortion),
            "dtw": _section_dict(self.dtw),
            "paths": _section_dict(self.paths),
            "runtime": _section_dict(self.runtime),
        }


def _section_dict(section: Any) -> dict[str, Any]:
    return {f.name: getattr(section, f.name) for f in fields(section)}


_SECTIONS: dict[str, type] = {
    "training": TrainingConfig,
    "decomposition": DecompositionConfig,
    "distortion": DistortionConfig,
    "dtw": DTWConfig,
    "paths": PathsConfig,
    "runtime": RuntimeConfig,
}

_FLOAT_KEYS = {"beta", "tolerance", "render_duration_s"}
_INT_KEYS = {"iterations", "threads", "seed", "band"}
_BOOL_KEYS = {"nonnegative", "squared_distance", "allow_skip"}


# =============================================================================
# Environment Variable Substitution
# =============================================================================


def substitute_env_vars(value: Any) -> Any:
    """Substitute ${VAR} references with environment values.

    Raises:
        ConfigError: If a referenced variable is not set
    """
    if isinstance(value, str):
        pattern = re.compile(r"\$\{([^}]+)\}")

        def replace_var(match: re.Match[str]) -> str:
            var_name = match.group(1)
            env_value = os.environ.get(var_name)
            if env_value is None:
                raise ConfigError(var_name, "environment variable not set")
            return env_value

        return pattern.sub(replace_var, value)

    elif isinstance(value, dict):
        return {k: substitute_env_vars(v) for k, v in value.items()}

    elif isinstance(value, list):
        return [substitute_env_vars(v) for v in value]

    return value


# =============================================================================
# Config File Discovery
# =============================================================================


def find_config_file(start_path: Path | None = None) -> Path | None:
    """Find configuration file in standard locations.

    Search order:
    1. ./.scorealign/config.yaml
    2. ./scorealign.yaml
    """
    if start_path is None:
        start_path = Path.cwd()

    start_path = start_path.resolve()
    candidates = [
        start_path / ".scorealign" / "config.yaml",
        start_path / "scorealign.yaml",
    ]
    for candidate in candidates:
        if candidate.exists():
            return candidate

    return None


# =============================================================================
# Config Loading
# =============================================================================


def _coerce(section: str, key: str, value: Any) -> Any:
    if value is None:
        return None
    # ${VAR} substitution yields strings; YAML literals arrive typed
    try:
        if key in _BOOL_KEYS:
            if isinstance(value, str):
                lowered = value.strip().lower()
                if lowered not in {"true", "false", "1", "0", "yes", "no"}:
                    raise ValueError(f"not a boolean: {value!r}")
                return lowered in {"true", "1", "yes"}
            return bool(value)
        if key in _INT_KEYS:
            if isinstance(value, float) and not value.is_integer():
                raise ValueError(f"not an integer: {value!r}")
            return int(value)
        if key in _FLOAT_KEYS:
            return float(value)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{section}.{key}", str(e)) from e
    return str(value)


def _build_section(name: str, data: Any, base: Any) -> Any:
    if data is None:
        return base
    if not isinstance(data, dict):
        raise ConfigError(name, "section must be a mapping")
    known = {f.name for f in fields(base)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"{name}.{sorted(unknown)[0]}", "unknown key")
    values = _section_dict(base)
    values.update({key: _coerce(name, key, value) for key, value in data.items()})
    return type(base)(**values)


def load_config_from_dict(data: dict[str, Any], base: RunConfig | None = None) -> RunConfig:
    """Load configuration from a dictionary.

    Args:
        data: Configuration dictionary (same layout as the YAML file)
        base: Values for keys the dictionary does not set (defaults when None)

    Raises:
        ConfigError: For unknown sections or keys, or invalid values
    """
    if not isinstance(data, dict):
        raise ConfigError("<root>", "configuration must be a mapping")
    data = substitute_env_vars(data)
    config = copy.deepcopy(base) if base is not None else RunConfig()

    unknown = set(data) - {"frontend", *_SECTIONS}
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown section")

    if "frontend" in data:
        frontend = data["frontend"] or {}
        if not isinstance(frontend, dict):
            raise ConfigError("frontend", "section must be a mapping")
        merged = {**config.frontend.to_dict(), **frontend}
        try:
            config.frontend = FrontendConfig.from_dict(merged)
        except (TypeError, ValueError) as e:
            raise ConfigError("frontend", str(e)) from e

    for name in _SECTIONS:
        if name in data:
            setattr(config, name, _build_section(name, data[name], getattr(config, name)))

    return config


def apply_overrides(config: RunConfig, overrides: dict[str, Any]) -> RunConfig:
    """Apply dotted-key CLI overrides (e.g. {"distortion.beta": 1.0}); None values are skipped."""
    nested: dict[str, dict[str, Any]] = {}
    for dotted, value in overrides.items():
        if value is None:
            continue
        section, _, key = dotted.partition(".")
        nested.setdefault(section, {})[key] = value
    if not nested:
        return config
    return load_config_from_dict(nested, base=config)


def load_config(
    config_path: Path | None = None,
    auto_discover: bool = True,
) -> RunConfig:
    """Load configuration from file.

    Args:
        config_path: Explicit path to config file
        auto_discover: Whether to search for config file if not specified

    Raises:
        FileNotFoundError: If config_path specified but doesn't exist
        ConfigError: If the file content is invalid
    """
    if config_path is not None:
        if not config_path.exists():
            raise FileNotFoundError(f"Config file not found: {config_path}")
        found_path: Path | None = config_path
    elif auto_discover:
        found_path = find_config_file()
    else:
        found_path = None

    if found_path is None:
        return RunConfig()

    try:
        with open(found_path, encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
    except UnicodeDecodeError as e:
        raise ConfigError(str(found_path), f"not valid UTF-8 at byte {e.start}") from e
    except yaml.YAMLError as e:
        raise ConfigError(str(found_path), f"invalid YAML: {e}") from e
    config = load_config_from_dict(data)
    config._config_path = found_path
    return config


def create_default_config() -> str:
    """Create default configuration YAML content.

    Returns:
        YAML string with default configuration and comments
    """
    return """# Scorealign Configuration

# STFT analysis (templates, patterns and inputs must share these)
frontend:
  sample_rate: 22050
  fft_size: 4096       # power of two
  hop_size: 256
  window: "hann"       # any scipy.signal.get_window name

# Unit pattern training
training:
  beta: 2.0            # beta-divergence of the updates (0 is not supported)
  iterations: 100
  tolerance: 1.0e-5
  render_duration_s: 1.0

# Per-frame decomposition over consecutive unit pairs
decomposition:
  nonnegative: true    # false = unconstrained least squares

# Distortion matrix
distortion:
  kind: "novel"        # novel, baseline
  beta: 2.0            # baseline only: 2 = Euclidean, 1 = KL
  alpha_scaling: "normalized"  # normalized, raw
  squared_distance: false

# Path search
dtw:
  allow_skip: false
  band: null           # Sakoe-Chiba half-width in frames

# Default file locations
paths:
  # bank: "bank.json"
  # patterns: "patterns.json"
  output: "."

runtime:
  threads: 1
  seed: 0
"""
