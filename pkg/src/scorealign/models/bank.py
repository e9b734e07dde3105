"""Note template entities.

- NoteTemplate: unit-norm magnitude spectrum of one (pitch, instrument)
- TemplateBank: immutable collection of templates built under one FrontendConfig
- InstrumentProfile: parameters of the synthetic harmonic template generator
"""

from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from scorealign.errors import ConfigMismatchError, TemplateMissingError, ValidationError
from scorealign.models.score import NoteKey
from scorealign.models.spectral import NORM_TOLERANCE, FrontendConfig


@dataclass(frozen=True)
class InstrumentProfile:
    """Harmonic comb parameters for synthetic templates.

    Attributes:
        decay: Partial amplitude decay exponent gamma (amplitude h**-gamma)
        partials: Number of partials H before Nyquist clipping
    """

    decay: float = 1.0
    partials: int = 20

    def __post_init__(self) -> None:
        """Validate profile parameters."""
        if self.partials < 1:
            raise ValidationError(f"partial count must be >= 1 (got {self.partials})")
        if not np.isfinite(self.decay) or self.decay < 0:
            raise ValidationError(f"partial decay must be finite and >= 0 (got {self.decay})")


@dataclass(frozen=True, eq=False)
class NoteTemplate:
    """Unit-norm spectrum of one note.

    Attributes:
        pitch: MIDI note number
        instrument: Instrument identifier
        spectrum: F-vector, nonnegative, Euclidean norm 1
    """

    pitch: int
    instrument: str
    spectrum: np.ndarray

    def __post_init__(self) -> None:
        """Validate sign and norm invariants."""
        spectrum = np.asarray(self.spectrum, dtype=np.float64)
        spectrum.setflags(write=False)
        object.__setattr__(self, "spectrum", spectrum)
        if spectrum.ndim != 1:
            raise ValidationError(f"template ({self.pitch}, {self.instrument}) must be 1-D")
        if np.any(spectrum < 0) or not np.all(np.isfinite(spectrum)):
            raise ValidationError(
                f"template ({self.pitch}, {self.instrument}) must be finite and nonnegative"
            )
        norm = float(np.linalg.norm(spectrum))
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise ValidationError(
                f"template ({self.pitch}, {self.instrument}) has norm {norm}, expected 1"
            )

    @property
    def key(self) -> NoteKey:
        """Return the (pitch, instrument) identity."""
        return (self.pitch, self.instrument)

    def to_dict(self) -> dict[str, Any]:
        """Convert to the bank JSON entry shape."""
        return {
            "pitch": self.pitch,
            "instrument": self.instrument,
            "spectrum": self.spectrum.tolist(),
        }


@dataclass(frozen=True)
class TemplateBank:
    """Immutable map (pitch, instrument) -> NoteTemplate.

    Attributes:
        templates: Templates keyed by (pitch, instrument)
        config: Analysis parameters every template was built under
    """

    templates: dict[NoteKey, NoteTemplate] = field(default_factory=dict)
    config: FrontendConfig = field(default_factory=FrontendConfig)

    def __post_init__(self) -> None:
        """Validate that every template matches the bank's frequency grid."""
        for key, template in self.templates.items():
            if template.key != key:
                raise ValidationError(f"template stored under {key} is {template.key}")
            if template.spectrum.shape[0] != self.config.n_bins:
                raise ValidationError(
                    f"template {key} has {template.spectrum.shape[0]} bins, "
                    f"bank config expects {self.config.n_bins}"
                )

    @classmethod
    def from_templates(
        cls, templates: Iterable[NoteTemplate], config: FrontendConfig
    ) -> "TemplateBank":
        """Build a bank, rejecting duplicate keys."""
        collected: dict[NoteKey, NoteTemplate] = {}
        for template in templates:
            if template.key in collected:
                raise ValidationError(f"duplicate template {template.key}")
            collected[template.key] = template
        return cls(templates=collected, config=config)

    def __len__(self) -> int:
        return len(self.templates)

    def __contains__(self, key: object) -> bool:
        return key in self.templates

    def __iter__(self) -> Iterator[NoteTemplate]:
        return iter(self.templates[key] for key in sorted(self.templates))

    def require_config(self, config: FrontendConfig) -> None:
        """Raise unless ``config`` equals the bank's analysis parameters."""
        if config != self.config:
            raise ConfigMismatchError(self.config, config)

    def missing(self, keys: Iterable[NoteKey]) -> list[NoteKey]:
        """Return the keys with no template, in canonical order."""
        return sorted(key for key in set(keys) if key not in self.templates)

    def matrix(self, keys: list[NoteKey]) -> np.ndarray:
        """Stack the spectra of ``keys`` as columns of an F x n matrix."""
        if not keys:
            return np.zeros((self.config.n_bins, 0))
        return np.column_stack([self.lookup(pitch, instrument).spectrum for pitch, instrument in keys])

    def lookup(
        self, pitch: int, instrument: str, config: FrontendConfig | None = None
    ) -> NoteTemplate:
        """Exact-key template lookup.

        Args:
            pitch: MIDI note number
            instrument: Instrument identifier
            config: When given, must equal the bank config

        Raises:
            ConfigMismatchError: If ``config`` differs from the bank config
            TemplateMissingError: If no template exists for the pair
        """
        if config is not None:
            self.require_config(config)
        try:
            return self.templates[(pitch, instrument)]
        except KeyError:
            raise TemplateMissingError(pitch, instrument) from None

    def to_dict(self) -> dict[str, Any]:
        """Convert to the bank JSON document."""
        return {
            "config": self.config.to_dict(),
            "templates": [template.to_dict() for template in self],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "TemplateBank":
        """Build from the bank JSON document."""
        if "config" not in data or "templates" not in data:
            raise ValidationError("bank document needs 'config' and 'templates'")
        config = FrontendConfig.from_dict(data["config"])
        templates = (
            NoteTemplate(
                pitch=int(entry["pitch"]),
                instrument=str(entry["instrument"]),
                spectrum=np.asarray(entry["spectrum"], dtype=np.float64),
            )
            for entry in data["templates"]
        )
        return cls.from_templates(templates, config)
