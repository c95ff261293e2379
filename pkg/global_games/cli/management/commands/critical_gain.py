"""
Mean-field critical gain over a (theta, lambda) grid.
"""
from cli.base import GameCommand, comma_list
from cli.config import PARAM_OPTIONS, build_run_config
from cli.output import Report
from common.exceptions import InvalidShape, NonPositiveRate
from meanfield.baselines import critical_gain_surface
from meanfield.serializers import CriticalGainPointSerializer

COLUMNS = ('theta', 'lambda', 'critical_gain')
DEFAULT_GRID = [0.1, 0.25, 0.5, 1.0, 2.0, 5.0]


class Command(GameCommand):
    help = 'Tabulate the gain above which low-threshold equilibria exist as N grows.'
    needs_params = False

    def add_command_arguments(self, parser):
        parser.add_argument('--thetas', type=comma_list(float), default=DEFAULT_GRID)
        parser.add_argument('--lambdas', type=comma_list(float), default=DEFAULT_GRID)

    def build_config(self, options):
        # k and p select the surface; theta and lambda come from the grid
        run_options = {key: value for key, value in options.items() if key not in PARAM_OPTIONS and key != 'params'}
        return build_run_config(run_options, needs_params=False)

    def run(self, config, **options):
        k = int(options['k']) if options.get('k') is not None else 1
        p = int(options['p']) if options.get('p') is not None else 1
        thetas, lambdas = options['thetas'], options['lambdas']
        if k < 1:
            raise InvalidShape(f"k={k} must be an integer >= 1.")
        if min(thetas + lambdas) <= 0:
            raise NonPositiveRate("Every theta and lambda on the grid must be positive.")
        surface = critical_gain_surface(thetas, lambdas, k, p)
        points = [
            {'theta': theta, 'lam': lam, 'critical_gain': float(surface[row, column])}
            for row, lam in enumerate(lambdas)
            for column, theta in enumerate(thetas)
        ]
        rows = [dict(point) for point in CriticalGainPointSerializer(points, many=True).data]
        return Report('critical_gain', config, rows, rows=rows, columns=COLUMNS,
                      additional={'k': k, 'p': p})
