"""
Run best-response dynamics and audit the profile they stop at.
"""
from pathlib import Path

from cli.base import GameCommand
from cli.output import Report, ReportRenderer, format_value
from common.exceptions import NotConverged, ParameterError, TooManyAgents
from common.settings import game_settings
from equilibrium.best_response import best_response_dynamics
from equilibrium.expected import quadrature_deviation_audit
from equilibrium.serializers import DynamicsResultSerializer, DynamicsRoundSerializer, QuadratureAuditSerializer
from estimators.models import ThresholdProfile, policy_kind_for
from simulation.audits import activation_frequencies, deviation_audit
from simulation.serializers import DeviationAuditReportSerializer

COLUMNS = ('round', 'taus', 'changed')


def initial_profile(value, params):
    """
    ``--init``: one threshold for everyone ("0", "never", "inf", ...) or a
    comma-separated threshold per agent.
    """
    taus = [item.strip() for item in value.split(',') if item.strip()]
    if len(taus) == 1:
        taus = taus * params.n_agents
    return ThresholdProfile.from_taus(policy_kind_for(params), taus)


def write_activation_trace(path, trace, params, config):
    """CSV of per-round empirical activation frequencies, one column per agent."""
    lines = [f"# seed={config.seed}", f"# n_samples={config.n_samples}"]
    lines.append(','.join(['round'] + [f"agent_{i}" for i in range(params.n_agents)]))
    for record in trace:
        frequencies = activation_frequencies(record.profile, params, config.n_samples, config.seed, config.workers)
        lines.append(','.join([str(record.index)] + [format_value(f.mean) for f in frequencies]))
    Path(path).write_text('\n'.join(lines) + '\n', encoding='utf-8')


class Command(GameCommand):
    help = 'Run round-robin best-response dynamics from an initial threshold profile.'

    def add_command_arguments(self, parser):
        parser.add_argument('--init', default='0', help='initial thresholds (default: everyone at 0)')
        parser.add_argument('--max-rounds', type=int, default=20)
        parser.add_argument('--trace', help='write one JSON line per round to this path')
        parser.add_argument('--activation-trace', help='write per-round activation frequencies (CSV) to this path')
        parser.add_argument(
            '--mc-audit', action='store_true',
            help='also run the Monte Carlo deviation audit with --n-samples realizations',
        )
        parser.add_argument(
            '--require-convergence', action='store_true',
            help='exit with a numerical error when the round limit is reached',
        )

    def run(self, config, **options):
        params = config.params
        if params.is_infinite:
            raise ParameterError("Best-response dynamics need a finite --n.")
        if params.n_agents > game_settings.MAX_DYNAMICS_AGENTS:
            raise TooManyAgents(
                f"{params.n_agents} agents exceed MAX_DYNAMICS_AGENTS={game_settings.MAX_DYNAMICS_AGENTS}."
            )
        initial = initial_profile(options['init'], params)
        result = best_response_dynamics(initial, params, options['max_rounds'])

        if options.get('trace'):
            renderer = ReportRenderer()
            lines = [renderer.render(DynamicsRoundSerializer(record).data).decode('utf-8') for record in result.trace]
            Path(options['trace']).write_text('\n'.join(lines) + '\n', encoding='utf-8')
        if options.get('activation_trace'):
            write_activation_trace(options['activation_trace'], result.trace, params, config)

        results = dict(DynamicsResultSerializer(result).data)
        audit = quadrature_deviation_audit(result.profile, params)
        results['audit'] = dict(QuadratureAuditSerializer(audit).data)
        if options.get('mc_audit'):
            report = deviation_audit(result.profile, params, n_realizations=config.n_samples,
                                     seed=config.seed, workers=config.workers)
            results['mc_audit'] = dict(DeviationAuditReportSerializer(report).data)

        rows = [
            {'round': record.index, 'taus': list(record.profile.taus), 'changed': list(record.changed)}
            for record in result.trace
        ]
        return Report('dynamics', config, results, rows=rows, columns=COLUMNS,
                      additional={'max_rounds': options['max_rounds'], 'init': options['init']})

    def after_report(self, report, config, **options):
        if options.get('require_convergence') and not report.results['converged']:
            raise NotConverged(f"No fixed point within {options['max_rounds']} rounds.")
