"""
Monte Carlo statistics of simulated play and the paired deviation audit.
"""
import logging

import numpy as np
from scipy import stats

from common.exceptions import IndexOutOfRange, ParameterError
from common.montecarlo import Moments, check_sample_count, merge_moments, run_chunked
from common.settings import game_settings
from equilibrium.expected import deviation_candidates
from estimators.models import ThresholdPolicy
from gamma_poisson.models import McEstimate
from .models import DeviationAuditReport, DeviationEstimate
from .sampling import check_simulated_profile, draw_states_and_signals, payoffs

logger = logging.getLogger(__name__)


def _resolve(n_realizations, seed):
    n_realizations = game_settings.DEFAULT_SAMPLES if n_realizations is None else n_realizations
    seed = game_settings.DEFAULT_SEED if seed is None else seed
    check_sample_count(n_realizations)
    return n_realizations, seed


def _estimates(moments, n_realizations, seed):
    means = np.atleast_1d(moments.mean)
    stderrs = np.atleast_1d(moments.stderr)
    return tuple(McEstimate(float(m), float(s), n_realizations, seed) for m, s in zip(means, stderrs))


def activation_frequencies(profile, params, n_realizations=None, seed=None, workers=None):
    """Per-agent empirical activation frequency, one McEstimate per agent."""
    n_agents = check_simulated_profile(profile, params)
    n_realizations, seed = _resolve(n_realizations, seed)

    def chunk(size, rng):
        _, signals = draw_states_and_signals(params, n_agents, rng, size)
        return Moments.of(profile.actions(signals), axis=0)

    moments = merge_moments(run_chunked(chunk, seed, n_realizations, workers))
    return _estimates(moments, n_realizations, seed)


def empirical_activation_probability(profile, params, n_realizations=None, seed=None, workers=None):
    """
    Fraction of (realization, agent) pairs that activate under a homogeneous
    profile; the standard error treats each realization as one draw.
    """
    if not profile.is_homogeneous:
        raise ParameterError("The pooled activation probability needs a homogeneous profile.")
    n_agents = check_simulated_profile(profile, params)
    n_realizations, seed = _resolve(n_realizations, seed)

    def chunk(size, rng):
        _, signals = draw_states_and_signals(params, n_agents, rng, size)
        return Moments.of(profile.actions(signals).mean(axis=1))

    moments = merge_moments(run_chunked(chunk, seed, n_realizations, workers))
    return _estimates(moments, n_realizations, seed)[0]


def realized_utility_estimate(profile, params, agent, n_realizations=None, seed=None, workers=None):
    """Sample mean of agent ``agent``'s realized utility."""
    n_agents = check_simulated_profile(profile, params)
    n_realizations, seed = _resolve(n_realizations, seed)
    if not 0 <= agent < n_agents:
        raise IndexOutOfRange(f"Agent index {agent} outside 0..{n_agents - 1}.")

    def chunk(size, rng):
        x, signals = draw_states_and_signals(params, n_agents, rng, size)
        return Moments.of(payoffs(profile.actions(signals), x, params)[:, agent])

    moments = merge_moments(run_chunked(chunk, seed, n_realizations, workers))
    return _estimates(moments, n_realizations, seed)[0]


def _as_policies(candidates, profile, params):
    if candidates is None:
        return deviation_candidates(params)
    return [
        candidate if isinstance(candidate, ThresholdPolicy) else ThresholdPolicy.from_value(profile.kind, candidate)
        for candidate in candidates
    ]


def deviation_audit(profile, params, candidate_deviations=None, n_realizations=None, seed=None,
                    workers=None, epsilon=None, confidence=None):
    """
    Estimate J_i(tau', tau_-i) - J_i(tau_i, tau_-i) for every agent i and
    candidate tau' on shared draws of (X, Y), so each gain is a paired
    difference. The profile passes when every one-sided upper confidence
    bound is below ``epsilon`` (AUDIT_EPS_FACTOR * g by default).
    """
    n_agents = check_simulated_profile(profile, params)
    n_realizations, seed = _resolve(n_realizations, seed)
    epsilon = game_settings.AUDIT_EPS_FACTOR * params.g if epsilon is None else epsilon
    confidence = game_settings.AUDIT_CONFIDENCE if confidence is None else confidence
    candidates = _as_policies(candidate_deviations, profile, params)
    pairs = [(i, deviation) for i in range(n_agents) for deviation in candidates]

    def chunk(size, rng):
        x, signals = draw_states_and_signals(params, n_agents, rng, size)
        actions = profile.actions(signals)
        base = payoffs(actions, x, params)
        gains = np.empty((size, len(pairs)))
        for column, (i, deviation) in enumerate(pairs):
            deviated = actions.copy()
            deviated[:, i] = deviation.activates(signals[:, i])
            gains[:, column] = payoffs(deviated, x, params)[:, i] - base[:, i]
        return Moments.of(gains, axis=0)

    moments = merge_moments(run_chunked(chunk, seed, n_realizations, workers))
    z = stats.norm.ppf(confidence)
    estimates = tuple(
        DeviationEstimate(i, deviation.to_value(), gain, gain.upper_bound(z))
        for (i, deviation), gain in zip(pairs, _estimates(moments, n_realizations, seed))
    )
    worst = max(estimates, key=lambda estimate: estimate.gain.mean)
    passed = all(estimate.upper < epsilon for estimate in estimates)
    logger.info("Monte Carlo deviation audit %s: max gain %.3g (agent %d -> %s), epsilon=%.3g",
                "passed" if passed else "failed", worst.gain.mean, worst.agent, worst.deviation, epsilon)
    return DeviationAuditReport(passed, epsilon, confidence, worst, estimates, n_realizations, seed)
