"""
Base class of the toolkit's management commands.
"""
import logging
import sys

from django.core.management.base import BaseCommand, CommandError, CommandParser

from common.exceptions import GlobalGameError
from common.utils import exit_code_for
from .config import OutputFormat, build_run_config
from .output import write_report

logger = logging.getLogger(__name__)


def comma_list(cast):
    """argparse type for comma-separated values."""
    def parse(value):
        return [cast(item) for item in value.split(',') if item.strip()]
    return parse


class GameCommandParser(CommandParser):
    """
    Argument errors (bad types, unknown choices) are validation errors and
    exit with code 1, not argparse's 2.
    """
    def error(self, message):
        if self.called_from_command_line:
            self.print_usage(sys.stderr)
            self.exit(1, f"{self.prog}: error: {message}\n")
        raise CommandError(f"Error: {message}", returncode=1)


class GameCommand(BaseCommand):
    """
    Shared options, configuration and error handling. Subclasses implement
    ``run(config, **options)`` returning a Report.
    """
    needs_params = True

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        parser.__class__ = GameCommandParser
        return parser

    def add_arguments(self, parser):
        group = parser.add_argument_group('parameters')
        group.add_argument('--params', help='JSON or YAML parameter file')
        group.add_argument('--k', type=float, help='prior shape k')
        group.add_argument('--theta', type=float, help='prior rate theta')
        group.add_argument('--lambda', dest='lambda', type=float, help='signal rate lambda')
        group.add_argument('--p', type=float, help='cost exponent p')
        group.add_argument('--g', type=float, help='gain g')
        group.add_argument('--n', help='number of agents, an integer or "inf"')

        run = parser.add_argument_group('run')
        run.add_argument('--tau-max', type=int, help='last threshold of the search grid')
        run.add_argument('--n-samples', type=int, help='Monte Carlo sample count')
        run.add_argument('--seed', type=int, help='seed of the random streams')
        run.add_argument('--workers', type=int, help='worker threads for Monte Carlo chunks')
        run.add_argument('--format', choices=OutputFormat.values, default=OutputFormat.JSON)
        run.add_argument('--out', help='write the report to this path instead of stdout')
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def build_config(self, options):
        return build_run_config(options, self.needs_params)

    def run(self, config, **options):
        raise NotImplementedError('subclasses of GameCommand must provide a run() method')

    def handle(self, *args, **options):
        logger.info("Starting %s", self.__class__.__module__.rsplit('.', 1)[-1])
        try:
            config = self.build_config(options)
            report = self.run(config, **options)
            write_report(report, self.stdout)
            self.after_report(report, config, **options)
        except GlobalGameError as exc:
            raise CommandError(f"{exc.code}: {exc.detail}", returncode=exc.exit_code) from exc
        except (OSError, ValueError) as exc:
            raise CommandError(str(exc), returncode=exit_code_for(exc)) from exc

    def after_report(self, report, config, **options):
        """Hook run once the report is written; may raise to set the exit code."""
