"""
Mean-field threshold of one parameter set next to the omniscient and
certainty-equivalence baselines.
"""
from common.exceptions import DegenerateBound, NoSolution
from equilibrium.conditions import sufficient_condition
from equilibrium.serializers import SufficientConditionSerializer
from meanfield.baselines import critical_gain_infinite, tau_certainty_equivalence, tau_omniscient
from meanfield.potential import is_unimodal, mfpf_argmax
from cli.base import GameCommand
from cli.output import Report

COLUMNS = ('tau_star', 'tau_omni', 'tau_ce', 'critical_gain', 'condition_holds', 'unimodal')


def threshold_summary(config):
    params = config.params
    tau_star, curve = mfpf_argmax(params, config.tau_max, config.n_samples, config.seed, config.workers)
    try:
        tau_ce = tau_certainty_equivalence(params)
    except NoSolution:
        tau_ce = None
    try:
        condition = sufficient_condition(params)
        critical_gain, holds = condition.critical_gain, condition.holds
        condition_data = dict(SufficientConditionSerializer(condition).data)
    except DegenerateBound:
        critical_gain, holds, condition_data = None, False, None
    return {
        'tau_star': tau_star,
        'tau_omni': tau_omniscient(params),
        'tau_ce': tau_ce,
        'critical_gain': critical_gain,
        'critical_gain_infinite': critical_gain_infinite(params) if params.p > 0 else None,
        'condition_holds': holds,
        'condition': condition_data,
        'unimodal': is_unimodal(curve),
        'tau_max': curve.taus[-1],
    }


class Command(GameCommand):
    help = 'Maximize the mean-field potential and report the baseline thresholds.'

    def run(self, config, **options):
        summary = threshold_summary(config)
        return Report('threshold', config, summary, rows=[summary], columns=COLUMNS)
