"""
Mean-field potential of homogeneous threshold profiles.

As N -> infinity the normalized potential of everyone using threshold tau
tends to E[(g/2) q(X)^2 - (q(X) - 1/2) X^p] with q(x) the probability that a
Poisson(lam x) signal triggers activation. Expectations over X are estimated
with seeded, chunked Monte Carlo; a whole threshold grid shares the same draws.
"""
import logging
import math

import numpy as np

from common.exceptions import ParameterError
from common.montecarlo import Moments, check_sample_count, merge_moments, run_chunked
from common.settings import game_settings
from equilibrium.expected import infinite_potential_sign, integrate_over_state
from estimators.models import PolicyKind, ThresholdPolicy, ThresholdProfile, policy_kind_for
from gamma_poisson.distributions import gamma_sample, poisson_cdf_sweep
from gamma_poisson.models import McEstimate
from gamma_poisson.special import gamma_moment, gamma_ratio
from .models import MfpfCurve, MfpfEndpoints

logger = logging.getLogger(__name__)


def default_tau_max(params):
    """Grid end used when none is given: 4 (lam+theta) max(g, 1) + 10 k."""
    return math.ceil(4 * params.posterior_rate * max(params.g, 1.0) + 10 * params.k)


def _potential_terms(q, x, params):
    return 0.5 * params.g * q * q - (q - 0.5) * np.power(x, float(params.p))


def _resolve(n_samples, seed):
    n_samples = game_settings.DEFAULT_SAMPLES if n_samples is None else n_samples
    seed = game_settings.DEFAULT_SEED if seed is None else seed
    check_sample_count(n_samples)
    return n_samples, seed


def mfpf_estimate(tau, params, n_samples=None, seed=None, workers=None):
    """
    Monte Carlo estimate of the mean-field potential at threshold ``tau``.

    ``tau`` is a nonnegative integer or a Bound accepted by the policy kind
    matching the sign of p.
    """
    n_samples, seed = _resolve(n_samples, seed)
    policy = ThresholdPolicy(policy_kind_for(params), tau)

    def chunk(size, rng):
        x = gamma_sample(params.k, params.theta, rng, size)
        q = policy.activation_given_rate(params.lam * x)
        return Moments.of(_potential_terms(q, x, params))

    moments = merge_moments(run_chunked(chunk, seed, n_samples, workers))
    return McEstimate(float(moments.mean), float(moments.stderr), n_samples, seed)


def mfpf_curve(params, tau_max=None, n_samples=None, seed=None, workers=None):
    """
    Estimate the potential for tau = 0..tau_max from one set of state draws.
    """
    tau_max = default_tau_max(params) if tau_max is None else tau_max
    if isinstance(tau_max, bool) or int(tau_max) != tau_max or tau_max < 1:
        raise ParameterError(f"tau_max must be an integer >= 1, got {tau_max!r}.")
    tau_max = int(tau_max)
    n_samples, seed = _resolve(n_samples, seed)
    low = policy_kind_for(params) == PolicyKind.LOW

    def chunk(size, rng):
        x = gamma_sample(params.k, params.theta, rng, size)
        cost = np.power(x, float(params.p))
        means = np.empty(tau_max + 1)
        m2 = np.empty(tau_max + 1)
        for tau, below in poisson_cdf_sweep(tau_max, params.lam * x):
            q = below if low else 1.0 - below
            values = 0.5 * params.g * q * q - (q - 0.5) * cost
            means[tau] = values.mean()
            centered = values - means[tau]
            m2[tau] = np.dot(centered, centered)
        return Moments(size, means, m2)

    moments = merge_moments(run_chunked(chunk, seed, n_samples, workers))
    stderrs = moments.stderr
    values = tuple(
        McEstimate(float(moments.mean[tau]), float(stderrs[tau]), n_samples, seed)
        for tau in range(tau_max + 1)
    )
    return MfpfCurve(tuple(range(tau_max + 1)), values, params, n_samples, seed)


def mfpf_argmax(params, tau_max=None, n_samples=None, seed=None, workers=None):
    """
    Threshold maximizing the estimated mean-field potential on 0..tau_max,
    the smallest one on ties. Returns ``(tau_star, curve)``.
    """
    curve = mfpf_curve(params, tau_max, n_samples, seed, workers)
    tau_star = curve.tau_star
    if tau_star == curve.taus[-1]:
        logger.warning("Potential maximum sits on the grid edge tau_max=%d for %s", tau_star, params)
    logger.info("Mean-field argmax tau*=%d for %s (n=%d, seed=%d)", tau_star, params, curve.n_samples, curve.seed)
    return tau_star, curve


def mfpf_endpoints(params):
    """
    Closed forms of the potential at tau = 0 and as tau -> infinity.

    With s0 = theta/(theta+lam) and s2 = theta/(theta+2 lam), the low kind has
    (g/2) s2^k - Gamma(k+p)/Gamma(k) theta^k/(theta+lam)^(k+p) + E[X^p]/2 at
    zero and (g - E[X^p])/2 in the limit. The high kind activates on the
    complementary signal set.
    """
    moment = gamma_moment(params.p, params.k, params.theta)
    s0 = (params.theta / params.posterior_rate) ** params.k
    s2 = (params.theta / (params.theta + 2 * params.lam)) ** params.k
    # E[exp(-lam X) X^p]
    tilted = gamma_ratio(params.k, params.p) * s0 / params.posterior_rate ** params.p
    if params.p > 0:
        return MfpfEndpoints(
            at_zero=0.5 * params.g * s2 - tilted + 0.5 * moment,
            at_infinity=0.5 * (params.g - moment),
        )
    return MfpfEndpoints(
        at_zero=0.5 * params.g * (1.0 - 2.0 * s0 + s2) - 0.5 * moment + tilted,
        at_infinity=0.5 * moment,
    )


def prelimit_potential(tau, params, n_agents=None, quadrature=None):
    """
    Normalized potential of N agents sharing threshold tau,
    1/2 E[g ((N-1)/N) q^2 + (2q - 1)(g/N - X^p)].
    """
    n_agents = params.n_agents if n_agents is None else n_agents
    if math.isinf(n_agents):
        raise ParameterError("The pre-limit potential needs a finite number of agents.")
    policy = ThresholdPolicy(policy_kind_for(params), tau)
    sign = infinite_potential_sign(ThresholdProfile((policy,) * int(n_agents)), params)
    if sign:
        return sign * math.inf
    share = params.g / n_agents

    def integrand(x):
        q = policy.activation_given_rate(params.lam * np.asarray(x, dtype=float))
        cost = np.power(x, float(params.p))
        return 0.5 * (params.g * (n_agents - 1) / n_agents * q * q + (2.0 * q - 1.0) * (share - cost))

    profile = ThresholdProfile((policy,))
    return integrate_over_state(integrand, params, profile, quadrature)


def is_unimodal(curve, n_sigmas=2.0):
    """
    True when the curve has a single local maximum up to Monte Carlo noise:
    no drop, on either side of the argmax, larger than ``n_sigmas`` combined
    standard errors before the curve climbs back up.
    """
    means = curve.means
    stderrs = curve.stderrs
    peak = curve.argmax_index

    def climbs(indices):
        best = indices[0]
        for i in indices[1:]:
            if means[best] - means[i] > n_sigmas * (stderrs[best] + stderrs[i]):
                # a later point above this dip would be a second mode
                if any(means[j] > means[i] + n_sigmas * (stderrs[i] + stderrs[j]) for j in indices[indices.index(i):]):
                    return False
            if means[i] > means[best]:
                best = i
        return True

    left = list(range(0, peak + 1))
    right = list(range(len(means) - 1, peak - 1, -1))
    return climbs(left) and climbs(right)
