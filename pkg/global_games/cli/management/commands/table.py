"""
Recompute the built-in reference table.
"""
from cli.base import GameCommand
from cli.output import Report
from meanfield.serializers import TableComparisonSerializer
from meanfield.table import REFERENCE_ROWS, reproduce_table

COLUMNS = (
    'k', 'theta', 'lambda', 'g',
    'tau_star', 'expected_tau_star', 'tau_omni', 'expected_tau_omni', 'tau_ce', 'expected_tau_ce', 'passed',
)
# below this many samples the argmax is only trusted to within two steps
FULL_PRECISION_SAMPLES = 10 ** 6


class Command(GameCommand):
    help = 'Reproduce the reference thresholds for the nine built-in parameter sets.'
    needs_params = False

    def run(self, config, **options):
        tolerance = 1 if config.n_samples >= FULL_PRECISION_SAMPLES else 2
        comparisons = reproduce_table(REFERENCE_ROWS, config.n_samples, config.seed, config.workers, tolerance)
        rows = [dict(row) for row in TableComparisonSerializer(comparisons, many=True).data]
        return Report(
            'table', config, rows, rows=rows, columns=COLUMNS,
            additional={
                'tau_star_tolerance': tolerance,
                'wide_tolerance': tolerance > 1,
                'all_passed': all(comparison.passed for comparison in comparisons),
            },
        )
