import logging
from pathlib import Path
from typing import Optional, Union

from jinja2 import Environment, FileSystemLoader, StrictUndefined, select_autoescape

from app.models.schemas import AnalysisReport, LawReport

logger = logging.getLogger(__name__)

TEMPLATE_DIR = Path(__file__).parent.parent / "templates" / "report_templates"

# Initialize Jinja2 environment
env = Environment(
    loader=FileSystemLoader(str(TEMPLATE_DIR)),
    autoescape=select_autoescape(["html"]),
    undefined=StrictUndefined,
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
)

Report = Union[AnalysisReport, LawReport]


class ReportService:
    """Serialises reports as JSON, or as text tables for ``--pretty``."""

    templates = {
        AnalysisReport: "analysis_report.txt",
        LawReport: "law_report.txt",
    }

    def to_json(self, report: Report) -> str:
        return report.model_dump_json(indent=2) + "\n"

    def to_text(self, report: Report) -> str:
        tpl = env.get_template(self.templates[type(report)])
        return tpl.render(report=report)

    def render(self, report: Report, pretty: bool = False) -> str:
        return self.to_text(report) if pretty else self.to_json(report)

    def write(self, text: str, output: Optional[Path]) -> None:
        """Write to ``output``, or to stdout when no path is given."""
        if output is None:
            print(text, end="")
            return
        Path(output).write_text(text, encoding="utf-8")
        logger.info("report written to %s", output)


report_service = ReportService()
