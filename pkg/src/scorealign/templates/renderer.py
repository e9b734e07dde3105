"""Markdown rendering of evaluation reports."""

import logging
from typing import Any

from jinja2 import Environment, PackageLoader, TemplateError, select_autoescape

from scorealign.errors import EvaluationError
from scorealign.models.evaluation import EvalReport
from scorealign.models.result import PipelineIssue
from scorealign.renderers.filters import percent, seconds

logger = logging.getLogger(__name__)


class ReportRenderer:
    """Renders per-case and corpus evaluation reports to Markdown.

    Usage:
        renderer = ReportRenderer()
        markdown = renderer.render([("case0", report, [])], summary=None)
    """

    def __init__(self) -> None:
        self._env = Environment(
            loader=PackageLoader("scorealign", "templates"),
            autoescape=select_autoescape(["html", "xml"]),
            trim_blocks=True,
            lstrip_blocks=True,
            keep_trailing_newline=True,
        )
        self._env.filters["seconds"] = seconds
        self._env.filters["percent"] = percent

    def render(
        self,
        cases: list[tuple[str, EvalReport | None, list[PipelineIssue]]],
        summary: dict[str, Any] | None = None,
        distortion: str = "novel",
        template_name: str = "report.md.j2",
    ) -> str:
        """Render evaluation results.

        Args:
            cases: (name, report or None when alignment failed, issues) per case
            summary: Corpus aggregate from average_reports, if any
            distortion: Distortion measure label
            template_name: Template file to use

        Raises:
            EvaluationError: If the template is missing or fails to render
        """
        context = {
            "cases": [
                {
                    "name": name,
                    "report": report.to_dict() if report is not None else None,
                    "issues": [issue.to_dict() for issue in issues],
                }
                for name, report, issues in cases
            ],
            "summary": summary,
            "distortion": distortion,
        }
        try:
            rendered = self._env.get_template(template_name).render(**context)
        except TemplateError as e:
            raise EvaluationError(f"report rendering failed: {e}") from e
        logger.debug("Rendered report (%d characters)", len(rendered))
        return rendered
