"""
Sufficient conditions for threshold equilibria and the scan bounds derived
from the cost estimate.
"""
import logging
import math

from common.exceptions import DegenerateBound, ScanLimitExceeded, WrongSign
from common.utils import scan_first
from estimators.estimates import cost_estimate, first_regular_signal
from estimators.models import Bound
from gamma_poisson.special import gamma_ratio
from .models import SufficientCondition

logger = logging.getLogger(__name__)


def _participation_ratio(params):
    """(N - 1)/N, tending to 1 in the mean-field limit."""
    if params.is_infinite:
        return 1.0
    return (params.n_agents - 1) / params.n_agents


def sufficient_condition_low(params):
    """
    Low thresholds (p > 0): a threshold equilibrium exists when g exceeds
    (N/(lam+theta)**p) * Gamma(p+k)/(k-1)! / ((N-1) s**k + 1), s = (theta+lam)/(theta+2 lam).
    """
    if params.p <= 0:
        raise WrongSign("The low-threshold condition needs p > 0.")
    moment = gamma_ratio(params.k, params.p) / params.posterior_rate ** params.p
    overlap = params.cross_success ** params.k
    if params.is_infinite:
        critical = moment / overlap
    else:
        critical = params.n_agents * moment / ((params.n_agents - 1) * overlap + 1)
    return SufficientCondition(holds=params.g > critical, critical_gain=critical, direction='above')


def sufficient_condition_high(params):
    """
    High thresholds (p < 0): a threshold equilibrium exists when g is below
    ((lam+theta)**(-p)/Gamma(1-p)) / (1 - ((N-1)/N) (1-p) s**(1-p)).
    """
    if params.p >= 0:
        raise WrongSign("The high-threshold condition needs p < 0.")
    bracket = 1.0 - _participation_ratio(params) * (1 - params.p) * params.cross_success ** (1 - params.p)
    if bracket <= 0:
        raise DegenerateBound(f"The bound's denominator {bracket:.6g} is not positive for {params}.")
    critical = params.posterior_rate ** (-params.p) / math.gamma(1 - params.p) / bracket
    return SufficientCondition(holds=params.g < critical, critical_gain=critical, direction='below')


def sufficient_condition(params):
    if params.p > 0:
        return sufficient_condition_low(params)
    return sufficient_condition_high(params)


def threshold_upper_bound(params):
    """
    T_bar = max{y : c_hat(y) < g}, the largest signal at which activation can
    pay for a low-threshold agent; Bound.NEVER when c_hat(0) >= g.
    """
    if params.p <= 0:
        raise WrongSign("The threshold upper bound needs p > 0.")
    first_costly = scan_first(lambda ys: cost_estimate(ys, params) >= params.g)
    if first_costly is None:
        raise ScanLimitExceeded(f"c_hat stays below g={params.g} over the whole scan range.")
    if first_costly == 0:
        return Bound.NEVER
    return first_costly - 1


def high_activation_bound(params, level=None):
    """
    First signal from which c_hat stays below ``level`` (default g/N): beyond it
    a high-threshold agent activates whatever the others do.
    """
    if params.p >= 0:
        raise WrongSign("The high-threshold activation bound needs p < 0.")
    if level is None:
        level = params.g / params.n_agents if not params.is_infinite else params.g
    start = first_regular_signal(params)
    first_cheap = scan_first(lambda ys: cost_estimate(ys, params) < level, start=start)
    if first_cheap is None:
        raise ScanLimitExceeded(f"c_hat stays above {level} over the whole scan range.")
    return first_cheap
