"""
Marginal signal distribution with the threshold markers, for plotting.
"""
from cli.base import GameCommand
from cli.output import Report
from common.exceptions import NoSolution
from meanfield.baselines import tau_certainty_equivalence, tau_omniscient
from meanfield.potential import mfpf_argmax
from meanfield.serializers import SignalRowSerializer
from meanfield.signals import signal_distribution

COLUMNS = ('y', 'pmf', 'cdf', 'markers')


class Command(GameCommand):
    help = 'Tabulate P(Y = y) with the mean-field, omniscient and certainty-equivalence thresholds marked.'

    def add_command_arguments(self, parser):
        parser.add_argument('--y-max', type=int, help='last signal value (default: the tail-mass bound)')
        parser.add_argument('--no-argmax', action='store_true', help='skip the Monte Carlo argmax marker')

    def run(self, config, **options):
        params = config.params
        thresholds = {'tau_omni': tau_omniscient(params)}
        try:
            thresholds['tau_ce'] = tau_certainty_equivalence(params)
        except NoSolution:
            pass
        if not options.get('no_argmax'):
            thresholds['tau_star'], _ = mfpf_argmax(
                params, config.tau_max, config.n_samples, config.seed, config.workers,
            )
        rows = [dict(row) for row in SignalRowSerializer(
            signal_distribution(params, options.get('y_max'), thresholds), many=True,
        ).data]
        return Report('signals', config, rows, rows=rows, columns=COLUMNS, additional={'thresholds': thresholds})
