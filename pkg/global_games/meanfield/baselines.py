"""
Baseline thresholds and the mean-field sufficient condition.
"""
import math

import numpy as np
from scipy import special

from common.exceptions import NoSolution, ScanLimitExceeded, WrongSign
from common.utils import scan_first
from estimators.estimates import cost_estimate, first_regular_signal
from gamma_poisson.special import gamma_ratio


def critical_gain_infinite(params):
    """
    Gain above which low threshold equilibria are guaranteed as N -> infinity,
    (theta+2 lam)**k / (theta+lam)**(p+k) * Gamma(p+k)/Gamma(k).
    """
    if params.p <= 0:
        raise WrongSign("The mean-field critical gain needs p > 0.")
    return (
        (params.theta + 2 * params.lam) ** params.k
        / params.posterior_rate ** (params.p + params.k)
        * gamma_ratio(params.k, params.p)
    )


def critical_gain_surface(thetas, lambdas, k=1, p=1):
    """
    Mean-field critical gain over a (theta, lambda) grid; rows follow
    ``lambdas``, columns follow ``thetas``.
    """
    if p <= 0:
        raise WrongSign("The mean-field critical gain needs p > 0.")
    theta, lam = np.meshgrid(np.asarray(thetas, dtype=float), np.asarray(lambdas, dtype=float))
    log_gain = (
        k * np.log(theta + 2 * lam) - (p + k) * np.log(theta + lam)
        + special.gammaln(p + k) - special.gammaln(k)
    )
    return np.exp(log_gain)


def tau_omniscient(params):
    """The omniscient state cutoff g**(1/p), unrounded."""
    return params.g ** (1.0 / params.p)


def _tau_ce_scan(params):
    if params.p > 0:
        if cost_estimate(0, params) > params.g:
            raise NoSolution(f"c_hat(0) exceeds g={params.g}: certainty equivalence never activates.")
        first_above = scan_first(lambda ys: cost_estimate(ys, params) > params.g)
        if first_above is None:
            raise ScanLimitExceeded(f"c_hat stays below g={params.g} over the whole scan range.")
        return first_above - 1
    start = first_regular_signal(params)
    if start == 0 and cost_estimate(0, params) <= params.g:
        raise NoSolution(f"c_hat(0) is below g={params.g}: certainty equivalence always activates.")
    first_below = scan_first(lambda ys: cost_estimate(ys, params) <= params.g, start=start)
    if first_below is None:
        raise ScanLimitExceeded(f"c_hat stays above g={params.g} over the whole scan range.")
    return first_below - 1


def tau_certainty_equivalence(params, closed_form=True):
    """
    Threshold obtained by treating c_hat(y) as the true cost: the largest tau
    with c_hat(tau) <= g for p > 0, the largest tau with c_hat(tau) > g for p < 0.

    For p = 1 this is floor((lam+theta) g - k), evaluated directly unless
    ``closed_form`` is False.
    """
    if params.p == 1 and closed_form:
        value = params.posterior_rate * params.g - params.k
        if value < 0:
            raise NoSolution(f"(lambda+theta) g - k = {value:.6g} < 0: certainty equivalence never activates.")
        # absorb rounding in products that are integers in exact arithmetic
        return math.floor(value + 1e-9)
    return _tau_ce_scan(params)
