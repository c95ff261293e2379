"""
Distributions of the Gamma-Poisson model.

The state X ~ Gamma(k, theta) uses the (shape, rate) convention. Signals are
conditionally independent Poisson(lam * X) counts, so the marginal of one
signal and the belief about another agent's signal are both Negative Binomial
in the "failures before the r-th success" convention.
"""
import logging
import math

import numpy as np
from scipy import special, stats

from common.exceptions import DomainError
from common.settings import game_settings
from .models import PosteriorState

logger = logging.getLogger(__name__)


def _check_positive(**values):
    for name, value in values.items():
        if np.any(np.asarray(value) <= 0):
            raise DomainError(f"{name} must be positive, got {value}.")


def _check_count(**values):
    for name, value in values.items():
        if np.any(np.asarray(value) < 0):
            raise DomainError(f"{name} must be a nonnegative count, got {value}.")


def _scalar(result):
    result = np.asarray(result)
    return float(result) if result.ndim == 0 else result


def gamma_pdf(x, shape, rate):
    """
    Gamma(shape, rate) density; zero for x < 0.
    """
    _check_positive(shape=shape, rate=rate)
    return _scalar(stats.gamma.pdf(x, a=shape, scale=1.0 / rate))


def gamma_sample(shape, rate, rng, size=None):
    """
    Draw from Gamma(shape, rate) with the caller's generator.
    """
    _check_positive(shape=shape, rate=rate)
    return rng.gamma(shape, 1.0 / rate, size)


def poisson_pmf(y, rate):
    _check_positive(rate=rate)
    _check_count(y=y)
    return _scalar(stats.poisson.pmf(y, rate))


def poisson_cdf(tau, rate):
    """
    P(Y <= tau) for Y ~ Poisson(rate); zero for tau < 0.

    Evaluated through the regularized upper incomplete Gamma function, which
    stays accurate in both tails. ``rate`` may be an array.
    """
    _check_positive(rate=rate)
    if tau < 0:
        return _scalar(np.zeros_like(np.asarray(rate, dtype=float)))
    return _scalar(special.pdtr(tau, rate))


def poisson_cdf_sweep(tau_max, rate):
    """
    Yield ``(tau, P(Y <= tau))`` for tau = 0..tau_max over an array of rates.

    Uses the log-space recurrence log p(y) = log p(y-1) + log(rate) - log(y)
    and accumulates the cdf with ``logaddexp``, so a whole grid costs one pass.
    """
    rate = np.asarray(rate, dtype=float)
    _check_positive(rate=rate)
    log_rate = np.log(rate)
    log_pmf = -rate
    log_cdf = log_pmf.copy()
    for tau in range(tau_max + 1):
        if tau > 0:
            log_pmf = log_pmf + log_rate - math.log(tau)
            log_cdf = np.logaddexp(log_cdf, log_pmf)
        yield tau, np.exp(np.minimum(log_cdf, 0.0))


def posterior_of_state(y, params):
    """
    Posterior of X after observing Y_i = y: Gamma(y + k, lam + theta).
    """
    _check_count(y=y)
    return PosteriorState(shape=y + params.k, rate=params.posterior_rate)


def _marginal(params):
    return stats.nbinom(params.k, params.theta / params.posterior_rate)


def marginal_signal_pmf(y, params):
    """
    P(Y_i = y) = C(y+k-1, y) (theta/(lam+theta))^k (lam/(lam+theta))^y.
    """
    _check_count(y=y)
    return _scalar(_marginal(params).pmf(y))


def marginal_signal_cdf(tau, params):
    if tau < 0:
        return 0.0
    return _scalar(_marginal(params).cdf(tau))


def signal_support_bound(params, eps=None):
    """
    Smallest y_max whose marginal tail mass P(Y_i > y_max) is below ``eps``.
    """
    eps = eps or game_settings.TAIL_EPSILON
    y_max = int(_marginal(params).isf(eps))
    logger.debug("Signal support truncated at y_max=%d (eps=%g) for %s", y_max, eps, params)
    return y_max


def _cross_belief(y, params):
    return stats.nbinom(params.k + y, params.cross_success)


def cross_belief_pmf(ell, y, params):
    """
    P(Y_j = ell | Y_i = y): Negative Binomial with r = k + y and failure
    probability lam / (theta + 2 lam).
    """
    _check_count(ell=ell, y=y)
    return _scalar(_cross_belief(y, params).pmf(ell))


def cross_belief_cdf(tau, y, params):
    """P(Y_j <= tau | Y_i = y)."""
    _check_count(y=y)
    if tau < 0:
        return 0.0
    return _scalar(_cross_belief(y, params).cdf(tau))


def cross_belief_sf(tau, y, params):
    """P(Y_j > tau | Y_i = y), computed directly so small tails keep their precision."""
    _check_count(y=y)
    if tau < 0:
        return 1.0
    return _scalar(_cross_belief(y, params).sf(tau))
