"""
Forward sampling of the full game.

X ~ Gamma(k, theta), then N conditionally independent Y_i ~ Poisson(lam X);
agents act through their threshold policies and earn
a_i * ((g/N) |a| - X**p).
"""
import logging

import numpy as np

from common.exceptions import ParameterError, ProfileLengthMismatch, TooManyAgents
from common.montecarlo import run_chunked
from common.settings import game_settings
from gamma_poisson.distributions import gamma_sample
from .models import RealizationBatch

logger = logging.getLogger(__name__)


def check_simulated_profile(profile, params):
    """Return the agent count after checking the profile against the game."""
    if params.is_infinite:
        raise ParameterError("Forward simulation needs a finite number of agents.")
    if len(profile) != params.n_agents:
        raise ProfileLengthMismatch(f"Expected {params.n_agents} thresholds, got {len(profile)}.")
    if params.n_agents > game_settings.MAX_SIM_AGENTS:
        raise TooManyAgents(
            f"{params.n_agents} agents exceed MAX_SIM_AGENTS={game_settings.MAX_SIM_AGENTS}; "
            "use the mean-field tools instead."
        )
    return params.n_agents


def draw_states_and_signals(params, n_agents, rng, size):
    x = gamma_sample(params.k, params.theta, rng, size)
    signals = rng.poisson(params.lam * x[:, None], size=(size, n_agents))
    return x, signals


def payoffs(actions, x, params):
    """
    Realized utilities for an (n, N) action array; idle agents earn 0 even
    where the cost is infinite.
    """
    actions = np.asarray(actions)
    x = np.asarray(x, dtype=float)
    with np.errstate(divide='ignore'):
        cost = np.power(x, float(params.p))
    share = params.g / params.n_agents * actions.sum(axis=-1)
    margin = (share - cost)[..., None]
    return np.where(actions == 1, np.broadcast_to(margin, actions.shape), 0.0)


def sample_realization(profile, params, rng):
    """
    One realization of the game. ``rng`` is a numpy Generator or a seed.
    """
    n_agents = check_simulated_profile(profile, params)
    rng = np.random.default_rng(rng)
    x, signals = draw_states_and_signals(params, n_agents, rng, 1)
    actions = profile.actions(signals)
    return RealizationBatch(x, signals, actions, payoffs(actions, x, params))[0]


def sample_batch(profile, params, n_realizations, seed=None, workers=None):
    """
    ``n_realizations`` draws built chunk by chunk from ``seed`` and
    concatenated in chunk order.
    """
    n_agents = check_simulated_profile(profile, params)
    seed = game_settings.DEFAULT_SEED if seed is None else seed

    def chunk(size, rng):
        x, signals = draw_states_and_signals(params, n_agents, rng, size)
        actions = profile.actions(signals)
        return x, signals, actions, payoffs(actions, x, params)

    parts = run_chunked(chunk, seed, n_realizations, workers)
    logger.debug("Sampled %d realizations of %d agents (seed=%d)", n_realizations, n_agents, seed)
    return RealizationBatch(*(np.concatenate(column) for column in zip(*parts)))
