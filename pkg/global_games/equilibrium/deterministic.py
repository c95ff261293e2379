"""
The deterministic (complete-information) game played at a known state x.

With the normalized linear benefit an agent's payoff is
a_i * ((g/N) * |a| - x**p): a congestion game with two resources, hence an
exact potential game whose pure equilibria sit at the all-zeros and all-ones
profiles.
"""
import itertools
import logging

import numpy as np

from common.exceptions import DomainError, ParameterError, TooManyAgents
from common.settings import game_settings
from estimators.models import policy_kind_for
from .models import ActionProfile

logger = logging.getLogger(__name__)


def state_cost(x, params):
    """c(x) = x**p, infinite at x = 0 when p < 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError(f"The state must be nonnegative, got {x}.")
    with np.errstate(divide='ignore'):
        cost = np.power(x, params.p)
    return float(cost) if cost.ndim == 0 else cost


def _finite_agents(params):
    if params.is_infinite:
        raise ParameterError("The deterministic game needs a finite number of agents.")
    return params.n_agents


def _as_profile(a, params):
    profile = a if isinstance(a, ActionProfile) else ActionProfile(tuple(a))
    if len(profile) != _finite_agents(params):
        raise ParameterError(f"Expected {params.n_agents} actions, got {len(profile)}.")
    return profile


def omniscient_action(x, params):
    """Activate iff the full-participation benefit covers the cost, g >= x**p."""
    return int(params.g >= state_cost(x, params))


def omniscient_threshold(params):
    """
    The state cutoff g**(1/p) and the kind of region where activation pays:
    x <= cutoff for p > 0, x >= cutoff for p < 0.
    """
    return params.g ** (1.0 / params.p), policy_kind_for(params)


def deterministic_utility(i, a, x, params):
    profile = _as_profile(a, params)
    profile.check_index(i)
    if not profile[i]:
        return 0.0
    return params.g / params.n_agents * profile.n_active - state_cost(x, params)


def deterministic_potential(a, x, params):
    """
    Pairwise potential 1/2 * sum_i sum_{j != i} phi_ij with
    phi_ij = (g/N) a_i a_j + ((a_i + a_j - 1)/(N - 1)) * (g/N - c(x)).
    """
    profile = _as_profile(a, params)
    n_agents = params.n_agents
    actions = np.array(profile.actions, dtype=float)
    margin = params.g / n_agents - state_cost(x, params)
    weight = (actions[:, None] + actions[None, :] - 1.0) / (n_agents - 1)
    # an infinite margin (p < 0 at x = 0) only enters through nonzero weights
    with np.errstate(invalid='ignore'):
        cost_terms = np.where(weight == 0.0, 0.0, weight * margin)
    phi = params.g / n_agents * np.outer(actions, actions) + cost_terms
    np.fill_diagonal(phi, 0.0)
    return 0.5 * phi.sum()


def congestion_potential(a, x, params):
    """
    Rosenthal form: sum over m = 1..|a| of the payoff with m participants,
    zero at the all-zeros profile.
    """
    profile = _as_profile(a, params)
    cost = state_cost(x, params)
    return float(sum(params.g / params.n_agents * m - cost for m in range(1, profile.n_active + 1)))


def potential_offset(x, params):
    """Constant gap between the pairwise and congestion forms, -(g/2 - N c(x)/2)."""
    return -(params.g / 2 - _finite_agents(params) * state_cost(x, params) / 2)


def pure_nash_set(x, params, tolerance=1e-12):
    """
    All pure Nash profiles at state x by brute force over the 2**N profiles.
    """
    n_agents = _finite_agents(params)
    if n_agents > game_settings.MAX_ENUM_AGENTS:
        raise TooManyAgents(f"Enumeration is limited to {game_settings.MAX_ENUM_AGENTS} agents, got {n_agents}.")
    cost = state_cost(x, params)
    share = params.g / n_agents
    actions = np.array(list(itertools.product((0, 1), repeat=n_agents)), dtype=np.int64)
    active = actions.sum(axis=1, keepdims=True)
    current = np.where(actions == 1, share * active - cost, 0.0)
    # flipping agent i moves |a| by 1 - 2 a_i and its own action to 1 - a_i
    flipped = np.where(actions == 0, share * (active + 1 - 2 * actions) - cost, 0.0)
    stable = np.all(flipped - current <= tolerance, axis=1)
    equilibria = frozenset(ActionProfile(tuple(row)) for row in actions[stable])
    logger.debug("x=%g: %d pure equilibria among %d profiles", x, len(equilibria), len(actions))
    return equilibria
