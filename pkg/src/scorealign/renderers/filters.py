"""Jinja2 filters for presenting evaluation numbers.

Missing values render as "N/A" so report tables never show "None".
"""

from typing import Any


def seconds(value: Any, digits: int = 3) -> str:
    """Format a duration in seconds, e.g. 0.0123 -> "0.012 s"."""
    if value is None:
        return "N/A"
    return f"{float(value):.{digits}f} s"


def percent(value: Any, digits: int = 1) -> str:
    """Format a fraction as a percentage, e.g. 0.95 -> "95.0%"."""
    if value is None:
        return "N/A"
    return f"{100.0 * float(value):.{digits}f}%"
