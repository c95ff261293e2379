"""
Run the property suites and fail with exit code 3 when any check fails.
"""
import argparse

from cli.base import GameCommand
from cli.output import Report
from cli.suites import FAULTS, SUITES, SuiteOptions, run_suites
from common.exceptions import SuiteFailure

COLUMNS = ('suite', 'passed', 'checks', 'failures')
# failure messages kept per suite in the report
MAX_REPORTED_FAILURES = 20


class Command(GameCommand):
    help = 'Run the property suites (all of them unless --suite is given).'
    needs_params = False

    def add_command_arguments(self, parser):
        parser.add_argument('--suite', action='append', choices=sorted(SUITES), help='suite to run; repeatable')
        parser.add_argument('--inject-fault', choices=sorted(FAULTS), help=argparse.SUPPRESS)

    def run(self, config, **options):
        names = options.get('suite') or list(SUITES)
        fault = FAULTS.get(options.get('inject_fault'), {})
        suite_options = SuiteOptions(seed=config.seed, n_samples=config.n_samples, workers=config.workers, **fault)
        results = run_suites(names, suite_options)
        rows = [
            {
                'suite': result.name,
                'passed': result.passed,
                'checks': result.checks,
                'failures': result.failures[:MAX_REPORTED_FAILURES],
                'n_failures': len(result.failures),
            }
            for result in results
        ]
        additional = {'fault': options.get('inject_fault')} if options.get('inject_fault') else {}
        return Report('verify', config, rows, rows=rows, columns=COLUMNS, additional=additional)

    def after_report(self, report, config, **options):
        failed = [row['suite'] for row in report.results if not row['passed']]
        if failed:
            raise SuiteFailure(f"Failed suites: {', '.join(failed)}.")
