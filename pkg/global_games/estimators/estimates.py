"""
Posterior estimates entering an agent's best response: the activation cost
estimate c_hat(y), the beliefs about other agents' actions and the benefit
estimate b_hat(y) under the normalized linear benefit.

Every function accepts a scalar signal or an array of signals.
"""
import numpy as np
from scipy import special

from common.exceptions import DomainError, ParameterError, ProfileLengthMismatch
from gamma_poisson.distributions import cross_belief_cdf, cross_belief_sf
from .models import Bound, PolicyKind


def _scalar(result):
    result = np.asarray(result, dtype=float)
    return float(result) if result.ndim == 0 else result


def cost_estimate(y, params):
    """
    c_hat(y) = E[X**p | Y_i = y] = Gamma(p+y+k) / (Gamma(y+k) (lam+theta)**p).
    """
    y = np.asarray(y)
    if np.any(y < 0):
        raise DomainError(f"Signals must be nonnegative, got {y}.")
    shape = y + params.k
    if np.any(shape + params.p <= 0):
        raise DomainError(f"c_hat is infinite where p+y+k <= 0 (p={params.p}, k={params.k}).")
    ratio = special.poch(shape, params.p)
    # multiply or divide by an integer power so the p = +-1 cases are exact
    if params.p > 0:
        return _scalar(ratio / params.posterior_rate ** params.p)
    return _scalar(ratio * params.posterior_rate ** (-params.p))


def first_regular_signal(params):
    """Smallest signal with a finite cost estimate, max(0, 1 - p - k)."""
    return max(0, 1 - params.p - params.k)


def _tau_of(tau):
    return Bound(tau) if isinstance(tau, str) else tau


def belief_low(y, tau_j, params):
    """
    P(Y_j <= tau_j | Y_i = y), the belief that a low-threshold agent activates.
    """
    tau_j = _tau_of(tau_j)
    if tau_j == Bound.UNBOUNDED:
        return _scalar(np.ones(np.shape(y)))
    if tau_j == Bound.NEVER:
        return _scalar(np.zeros(np.shape(y)))
    if isinstance(tau_j, Bound):
        raise ParameterError(f"'{tau_j}' is not a low threshold.")
    return _scalar(cross_belief_cdf(tau_j, np.asarray(y), params))


def belief_high(y, tau_j, params):
    """
    P(Y_j > tau_j | Y_i = y), the belief that a high-threshold agent activates.
    """
    tau_j = _tau_of(tau_j)
    if tau_j == Bound.UNBOUNDED:
        return _scalar(np.zeros(np.shape(y)))
    if tau_j == Bound.ALWAYS:
        return _scalar(np.ones(np.shape(y)))
    if isinstance(tau_j, Bound):
        raise ParameterError(f"'{tau_j}' is not a high threshold.")
    return _scalar(cross_belief_sf(tau_j, np.asarray(y), params))


def activation_belief(y, policy, params):
    if policy.kind == PolicyKind.LOW:
        return belief_low(y, policy.tau, params)
    return belief_high(y, policy.tau, params)


def benefit_estimate(y, profile_others, params):
    """
    b_hat(y) = (g/N) * (sum of beliefs that each other agent activates + 1).
    """
    if params.is_infinite:
        raise ParameterError("The benefit estimate needs a finite number of agents.")
    n_agents = params.n_agents
    if len(profile_others) != n_agents - 1:
        raise ProfileLengthMismatch(
            f"Expected {n_agents - 1} other agents, got {len(profile_others)}."
        )
    if profile_others.is_homogeneous:
        expected_active = (n_agents - 1) * np.asarray(activation_belief(y, profile_others[0], params))
    else:
        expected_active = sum(np.asarray(activation_belief(y, policy, params)) for policy in profile_others)
    return _scalar(params.g / n_agents * (expected_active + 1.0))

