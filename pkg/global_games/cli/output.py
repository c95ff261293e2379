"""
Report rendering: JSON through DRF's JSONRenderer and CSV with leading
``# key=value`` metadata lines. Both are free of timestamps so reruns of
the same configuration produce the same bytes.
"""
import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

from rest_framework.renderers import JSONRenderer

from common.settings import game_settings
from common.utils import generate_report_data
from gamma_poisson.params import dump_params
from .config import OutputFormat


class ReportRenderer(JSONRenderer):
    """Compact, key-sorted JSON; non-finite floats are rejected."""
    compact = True

    def render(self, data, accepted_media_type=None, renderer_context=None):
        if data is None:
            return b''
        return self.encoder_class(
            sort_keys=True, ensure_ascii=self.ensure_ascii, allow_nan=not self.strict,
            separators=(',', ':'),
        ).encode(data).encode('utf-8')


@dataclass
class Report:
    """
    Output of one command: the JSON payload plus the CSV rows and columns.
    """
    command: str
    config: object
    results: object
    rows: list = field(default_factory=list)
    columns: tuple = ()
    additional: dict = field(default_factory=dict)

    def data(self):
        params = dump_params(self.config.params) if self.config.params is not None else None
        return generate_report_data(
            self.command, params, self.results,
            seed=self.config.seed, n_samples=self.config.n_samples, additional_data=self.additional,
        )


def format_value(value, digits=None):
    digits = digits or game_settings.CSV_DIGITS
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        if not math.isfinite(value):
            return 'inf' if value > 0 else ('-inf' if value < 0 else 'nan')
        return f"{value:.{digits}g}"
    if isinstance(value, (list, tuple)):
        return ';'.join(format_value(item, digits) for item in value)
    return str(value)


def metadata_lines(metadata, prefix=''):
    for key, value in metadata.items():
        if isinstance(value, dict):
            yield from metadata_lines(value, f"{prefix}{key}.")
        else:
            yield f"# {prefix}{key}={format_value(value)}"


def render_json(report):
    return ReportRenderer().render(report.data()).decode('utf-8') + '\n'


def render_csv(report):
    buffer = io.StringIO()
    for line in metadata_lines(report.data()['metadata']):
        buffer.write(line + '\n')
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(report.columns)
    for row in report.rows:
        writer.writerow([format_value(row.get(column)) for column in report.columns])
    return buffer.getvalue()


def render(report):
    if report.config.format == OutputFormat.CSV:
        return render_csv(report)
    return render_json(report)


def write_report(report, stdout):
    """
    Write the rendered report to ``--out`` when given, to ``stdout`` otherwise.
    """
    content = render(report)
    if report.config.out:
        Path(report.config.out).write_text(content, encoding='utf-8')
    else:
        stdout.write(content, ending='')
    return content
