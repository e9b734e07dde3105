"""Scorealign report rendering.

Jinja2 templates render evaluation reports to Markdown; the same input always
produces the same output.
"""

from scorealign.templates.renderer import ReportRenderer

__all__ = ["ReportRenderer"]
