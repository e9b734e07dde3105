"""Distortion measure registry.

The registry maps measure names to DistortionMeasure classes. The measure in
use is selected by the `distortion.kind` config key, not hardcoded.

Adding a new measure:
    1. Subclass DistortionMeasure and implement compute()
    2. Register it here (or via get_registry().register(...))
    3. No changes needed to the rest of the codebase
"""

from typing import Any

from scorealign.analyzers.base import (
    DistortionMeasure,
    DistortionSettings,
    MeasureNotAvailableError,
)


class MeasureRegistry:
    """Registry of available distortion measures.

    Configuration example:
        distortion:
          kind: novel      # -> NovelDistortion (subspace decomposition)
          kind: baseline   # -> BaselineDistortion (beta-divergence)
    """

    def __init__(self) -> None:
        """Initialize empty registry."""
        self._measures: dict[str, type[DistortionMeasure]] = {}
        self._default: str | None = None

    def register(
        self,
        name: str,
        measure_class: type[DistortionMeasure],
        is_default: bool = False,
    ) -> None:
        """Register a distortion measure.

        Args:
            name: Measure identifier
            measure_class: Measure class to register
            is_default: Whether this is the default measure
        """
        self._measures[name] = measure_class
        if is_default:
            self._default = name

    def get(self, name: str | None = None, settings: DistortionSettings | None = None) -> DistortionMeasure:
        """Instantiate a registered measure.

        Args:
            name: Measure name (uses default if None)
            settings: Measure options

        Raises:
            MeasureNotAvailableError: If the name is not registered
        """
        measure_name = name or self._default
        if measure_name is None or measure_name not in self._measures:
            raise MeasureNotAvailableError(str(measure_name), self.list_measures())
        return self._measures[measure_name](measure_name, settings)

    def list_measures(self) -> list[str]:
        """Get list of registered measure names."""
        return sorted(self._measures)

    def get_metadata(self) -> dict[str, Any]:
        """Get registry metadata for logging and debugging."""
        return {"measures": self.list_measures(), "default": self._default}


_registry: MeasureRegistry | None = None


def setup_default_measures(registry: MeasureRegistry) -> None:
    """Register the built-in novel and baseline measures."""
    from scorealign.analyzers.distortion import BaselineDistortion, NovelDistortion

    registry.register("novel", NovelDistortion, is_default=True)
    registry.register("baseline", BaselineDistortion)


def get_registry() -> MeasureRegistry:
    """Get the global measure registry, populated with the built-in measures."""
    global _registry
    if _registry is None:
        _registry = MeasureRegistry()
        setup_default_measures(_registry)
    return _registry


def reset_registry() -> None:
    """Reset the global registry (primarily for testing)."""
    global _registry
    _registry = None
