"""Jinja2 filters for evaluation reports."""

from scorealign.renderers.filters import percent, seconds

__all__ = ["percent", "seconds"]
