"""
Export the mean-field potential curve for plotting.
"""
import math

from cli.base import GameCommand
from cli.output import Report
from meanfield.potential import is_unimodal, mfpf_argmax, mfpf_endpoints, prelimit_potential
from meanfield.serializers import MfpfCurveSerializer, MfpfEndpointsSerializer

COLUMNS = ('tau', 'value', 'stderr', 'is_argmax')


class Command(GameCommand):
    help = 'Estimate the mean-field potential on 0..tau_max and mark its maximizer.'

    def add_command_arguments(self, parser):
        parser.add_argument(
            '--prelimit', action='store_true',
            help='add the finite-N potential for the --n agents as an extra column',
        )

    def run(self, config, **options):
        params = config.params
        _, curve = mfpf_argmax(params, config.tau_max, config.n_samples, config.seed, config.workers)
        data = MfpfCurveSerializer(curve).data
        points = [dict(point) for point in data['points']]
        columns = COLUMNS
        if options.get('prelimit') and not params.is_infinite:
            for point in points:
                value = prelimit_potential(point['tau'], params)
                # infinite when the cost moment E[X^p] diverges
                point['prelimit'] = value if math.isfinite(value) else None
            columns = COLUMNS + ('prelimit',)
        additional = {'tau_star': curve.tau_star, 'unimodal': is_unimodal(curve)}
        if params.k + params.p > 0:
            additional['endpoints'] = dict(MfpfEndpointsSerializer(mfpf_endpoints(params)).data)
        results = {'tau_star': curve.tau_star, 'points': points}
        return Report('potential', config, results, rows=points, columns=columns, additional=additional)
