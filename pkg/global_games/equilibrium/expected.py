"""
Expected utilities and the expected potential of threshold profiles.

Signals are conditionally independent given the state, so every expectation
reduces to a one-dimensional integral over the Gamma prior of X with the
conditional activation probabilities F_i(x) = P(policy i activates | X = x).
The integrals run on [0, x_hi], x_hi leaving prior tail mass QUAD_TAIL_MASS,
by adaptive quadrature. When quadrature misses its tolerance a seeded Monte
Carlo average of the same integrand is used instead (QUAD_MC_FALLBACK).
"""
import logging
import math
import warnings

import numpy as np
from scipy import integrate, stats

from common.exceptions import (
    IndexOutOfRange, ParameterError, ProfileLengthMismatch, QuadratureFailure,
)
from common.montecarlo import Moments, merge_moments, run_chunked
from common.settings import game_settings
from estimators.models import Bound, PolicyKind, ThresholdPolicy
from gamma_poisson.models import McEstimate
from .conditions import high_activation_bound, threshold_upper_bound
from .deterministic import state_cost
from .models import DeviationGain, QuadratureAudit, QuadratureSpec

logger = logging.getLogger(__name__)


def _prior(params):
    return stats.gamma(params.k, scale=1.0 / params.theta)


def _check_profile(profile, params):
    if params.is_infinite:
        raise ParameterError("Expected utilities need a finite number of agents.")
    if len(profile) != params.n_agents:
        raise ProfileLengthMismatch(f"Expected {params.n_agents} thresholds, got {len(profile)}.")


def integrate_over_state(integrand, params, profile=None, quadrature=None):
    """
    E[integrand(X)] under the Gamma prior of the state.

    ``integrand`` must accept a scalar or an array of states. Threshold
    locations tau/lam of ``profile`` are passed to the quadrature as break points.
    """
    quadrature = quadrature or QuadratureSpec.from_settings()
    prior = _prior(params)
    upper = float(prior.isf(quadrature.tail_mass))
    points = None
    if profile is not None:
        points = sorted({
            policy.tau / params.lam for policy in profile
            if policy.is_finite and 0 < policy.tau / params.lam < upper
        }) or None

    with warnings.catch_warnings():
        warnings.simplefilter('ignore', integrate.IntegrationWarning)
        value, abserr, info, *message = integrate.quad(
            lambda x: prior.pdf(x) * integrand(x), 0.0, upper,
            epsabs=quadrature.atol, epsrel=quadrature.rtol,
            limit=max(quadrature.limit, len(points or ()) + 1), points=points, full_output=1,
        )
    if not message and np.isfinite(value):
        return float(value)

    reason = message[0] if message else "non-finite value"
    if not quadrature.mc_fallback:
        raise QuadratureFailure(f"Quadrature failed for {params}: {reason} (abserr={abserr:.3g}).")
    logger.warning("Quadrature failed for %s (%s); using %d Monte Carlo samples",
                   params, reason, quadrature.fallback_samples)
    return monte_carlo_over_state(integrand, params, quadrature.fallback_samples, quadrature.seed).mean


def _expansion_at_zero(policy):
    """
    (F0, sign, m) with P(activate | X = x) = F0 + sign * O(x**m) as x -> 0;
    m is None when the probability does not depend on x.
    """
    if policy.never_activates:
        return 0, 0, None
    if policy.always_activates:
        return 1, 0, None
    if policy.kind == PolicyKind.LOW:
        return 1, -1, policy.tau + 1
    return 0, 1, policy.tau + 1


def _cost_diverges(order, params):
    """E[X**order * X**p] is infinite under the Gamma(k) prior iff order + k + p <= 0."""
    return params.p < 0 and order + params.k + params.p <= 0


def utility_diverges(policy, params):
    """True when an agent using ``policy`` pays an infinite expected cost."""
    full, _, order = _expansion_at_zero(policy)
    if not full and order is None:
        return False
    return _cost_diverges(0 if full else order, params)


def infinite_potential_sign(profile, params):
    """
    +1 or -1 when the expected potential of ``profile`` is infinite with that
    sign, 0 when it is finite. Near x = 0 the cost enters as -(2S - N)/2 * x**p.
    """
    if params.p > 0:
        return 0
    expansions = [_expansion_at_zero(policy) for policy in profile]
    net = 2 * sum(full for full, _, _ in expansions) - len(expansions)
    order = 0
    if net == 0:
        # one kind per profile, so the leading terms share a sign
        moving = [(m, sign) for _, sign, m in expansions if m is not None]
        if not moving:
            return 0
        order, net = min(moving)
    if not _cost_diverges(order, params):
        return 0
    return 1 if net < 0 else -1


def monte_carlo_over_state(integrand, params, n_samples, seed, workers=None):
    """Seeded sample mean of integrand(X), merged chunk by chunk."""
    def chunk(size, rng):
        x = rng.gamma(params.k, 1.0 / params.theta, size)
        return Moments.of(integrand(x))

    moments = merge_moments(run_chunked(chunk, seed, n_samples, workers))
    return McEstimate(float(moments.mean), float(moments.stderr), n_samples, seed)


def _activation_matrix(profile, x, params):
    return profile.activation_given_rate(params.lam * np.asarray(x, dtype=float))


def expected_threshold_utility(i, profile, params, quadrature=None):
    """
    U_i = E[F_i(X) * ((g/N) * (sum_{j != i} F_j(X) + 1) - X**p)].
    """
    _check_profile(profile, params)
    if not 0 <= i < len(profile):
        raise IndexOutOfRange(f"Agent index {i} outside 0..{len(profile) - 1}.")
    if profile[i].never_activates:
        return 0.0
    if utility_diverges(profile[i], params):
        logger.debug("Agent %d pays an infinite expected cost under %s", i, profile[i])
        return -math.inf
    share = params.g / params.n_agents

    def integrand(x):
        activation = _activation_matrix(profile, x, params)
        others = activation.sum(axis=-1) - activation[..., i]
        return activation[..., i] * (share * (others + 1.0) - state_cost(x, params))

    return integrate_over_state(integrand, params, profile, quadrature)


def expected_potential(profile, params, quadrature=None):
    """
    Expected pairwise potential of the threshold profile,
    E[1/2 ((g/N)(S^2 - sum F_i^2) + (2S - N)(g/N - X**p))] with S = sum F_i(X).
    """
    _check_profile(profile, params)
    sign = infinite_potential_sign(profile, params)
    if sign:
        return sign * math.inf
    n_agents = params.n_agents
    share = params.g / n_agents

    def integrand(x):
        activation = _activation_matrix(profile, x, params)
        total = activation.sum(axis=-1)
        pairs = total * total - (activation * activation).sum(axis=-1)
        return 0.5 * (share * pairs + (2.0 * total - n_agents) * (share - state_cost(x, params)))

    return integrate_over_state(integrand, params, profile, quadrature)


def deviation_candidates(params):
    """
    Thresholds worth checking in a deviation audit: {Never, 0..T_bar} for
    p > 0 and {Always, 0..y_hi} for p < 0, y_hi from high_activation_bound.
    """
    if params.p > 0:
        t_bar = threshold_upper_bound(params)
        finite = [] if t_bar == Bound.NEVER else list(range(t_bar + 1))
        return [ThresholdPolicy(PolicyKind.LOW, Bound.NEVER)] + [ThresholdPolicy(PolicyKind.LOW, t) for t in finite]
    y_hi = high_activation_bound(params)
    return [ThresholdPolicy(PolicyKind.HIGH, Bound.ALWAYS)] + [ThresholdPolicy(PolicyKind.HIGH, t) for t in range(y_hi)]


def quadrature_deviation_audit(profile, params, quadrature=None, candidates=None, tolerance=None):
    """
    Largest expected-utility gain any single agent gets by switching to one
    of ``candidates``; the profile passes when it stays below ``tolerance``.
    """
    _check_profile(profile, params)
    tolerance = game_settings.AUDIT_TOLERANCE if tolerance is None else tolerance
    candidates = deviation_candidates(params) if candidates is None else candidates
    gains = []
    for i, incumbent in enumerate(profile):
        base = expected_threshold_utility(i, profile, params, quadrature)
        for deviation in candidates:
            if deviation == incumbent:
                continue
            value = expected_threshold_utility(i, profile.replace(i, deviation), params, quadrature)
            # two infinite costs are equally bad
            gain = 0.0 if value == base else value - base
            gains.append(DeviationGain(i, deviation.to_value(), gain))
    worst = max(gains, key=lambda gain: gain.gain, default=DeviationGain(0, profile[0].to_value(), 0.0))
    passed = worst.gain < tolerance
    logger.info("Quadrature deviation audit %s: max gain %.3g (agent %d -> %s)",
                "passed" if passed else "failed", worst.gain, worst.agent, worst.deviation)
    return QuadratureAudit(passed, tolerance, worst, len(gains), tuple(gains))
