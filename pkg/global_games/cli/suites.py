"""
Property suites run by the ``verify`` command.

Each suite checks one family of properties over fixed parameter grids and
seeds and returns a SuiteResult listing every failed check. Statistical
checks use a STAT_SIGMAS standard-error band.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from equilibrium.deterministic import (
    congestion_potential, deterministic_potential, deterministic_utility, pure_nash_set,
)
from equilibrium.expected import expected_potential, expected_threshold_utility
from equilibrium.models import ActionProfile
from estimators.estimates import belief_high, belief_low, benefit_estimate, cost_estimate, first_regular_signal
from estimators.models import PolicyKind, ThresholdPolicy, ThresholdProfile
from gamma_poisson.distributions import (
    cross_belief_pmf, marginal_signal_pmf, poisson_cdf, poisson_cdf_sweep, posterior_of_state,
    signal_support_bound,
)
from gamma_poisson.models import ModelParams
from meanfield.baselines import critical_gain_infinite, tau_certainty_equivalence, tau_omniscient
from meanfield.potential import mfpf_endpoints, mfpf_estimate
from meanfield.table import REFERENCE_ROWS, row_params

logger = logging.getLogger(__name__)

STAT_SIGMAS = 4.0
NEAR_ONE = 1.0 - 1e-12
GRID = [
    (k, theta, lam)
    for k in (1, 2, 3)
    for theta in (0.1, 0.5, 1.0)
    for lam in (1.0, 2.0, 5.0)
]


@dataclass(frozen=True)
class SuiteOptions:
    seed: int
    n_samples: int
    workers: int = 1
    cost_fn: object = cost_estimate


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def check(self, condition, message):
        self.checks += 1
        if not condition:
            self.failures.append(message)


def _monotone(values, increasing):
    steps = np.diff(values) if increasing else -np.diff(values)
    interior = (values[:-1] > 1e-300) & (values[1:] > 1e-300) & (values[:-1] < NEAR_ONE) & (values[1:] < NEAR_ONE)
    return bool(np.all(steps >= 0) and np.all(steps[interior] > 0))


def monotonicity_suite(options):
    """Cost estimate, beliefs and benefit limits over the 27-point grid."""
    result = SuiteResult('monotonicity')
    for k, theta, lam in GRID:
        for p in (1, 2):
            params = ModelParams(k, theta, lam, p, 1.0)
            costs = np.asarray(options.cost_fn(np.arange(501), params))
            result.check(np.all(np.diff(costs) > 0), f"c_hat not increasing for {params}")
        for p in (-1, -2):
            params = ModelParams(k, theta, lam, p, 1.0)
            ys = np.arange(first_regular_signal(params), 501)
            costs = np.asarray(options.cost_fn(ys, params))
            result.check(np.all(np.diff(costs) < 0), f"c_hat not decreasing for {params}")

        params = ModelParams(k, theta, lam, 1, 1.0)
        ys = np.arange(301)
        for tau in range(51):
            result.check(_monotone(belief_low(ys, tau, params), increasing=False),
                         f"pi_low not decreasing at tau={tau} for {params}")
            result.check(_monotone(belief_high(ys, tau, params), increasing=True),
                         f"pi_high not increasing at tau={tau} for {params}")

        for kind, p, limit in ((PolicyKind.LOW, 1, 1.0 / 3), (PolicyKind.HIGH, -1, 1.0)):
            params = ModelParams(k, theta, lam, p, 1.0, 3)
            others = ThresholdProfile.homogeneous(kind, 5, 2)
            benefit = benefit_estimate(1000, others, params)
            result.check(abs(benefit - limit) < 1e-6, f"b_hat(1000)={benefit:.9g} far from {limit:.9g} for {params}")
    return result


def potential_suite(options):
    """Single-flip potential identities, deterministic and in expectation."""
    result = SuiteResult('potential')
    rng = np.random.default_rng(options.seed)
    for _ in range(1000):
        n_agents = int(rng.integers(2, 9))
        params = ModelParams(1, 1.0, 5.0, int(rng.choice([1, -1])), float(rng.uniform(0.5, 5.0)), n_agents)
        x = float(rng.uniform(0.1, 10.0))
        base = ActionProfile(tuple(int(a) for a in rng.integers(0, 2, n_agents)))
        i = int(rng.integers(n_agents))
        on, off = base.with_action(i, 1), base.with_action(i, 0)
        delta_u = deterministic_utility(i, on, x, params) - deterministic_utility(i, off, x, params)
        for potential in (deterministic_potential, congestion_potential):
            delta_phi = potential(on, x, params) - potential(off, x, params)
            result.check(abs(delta_phi - delta_u) < 1e-12,
                         f"{potential.__name__}: flip of agent {i} in {base} at x={x:.6g}")

    choices = ['never', 'inf'] + list(range(13))
    for _ in range(200):
        n_agents = int(rng.integers(2, 5))
        params = ModelParams(1, 1.0, 5.0, 1, 2.0, n_agents)
        taus = [choices[j] for j in rng.integers(len(choices), size=n_agents)]
        i = int(rng.integers(n_agents))
        first, second = (choices[j] for j in rng.integers(len(choices), size=2))
        profile_a = ThresholdProfile.from_taus(PolicyKind.LOW, taus).replace(i, ThresholdPolicy(PolicyKind.LOW, first))
        profile_b = profile_a.replace(i, ThresholdPolicy(PolicyKind.LOW, second))
        delta_u = expected_threshold_utility(i, profile_a, params) - expected_threshold_utility(i, profile_b, params)
        delta_phi = expected_potential(profile_a, params) - expected_potential(profile_b, params)
        result.check(abs(delta_u - delta_phi) < 1e-6, f"expected potential: agent {i} {first} -> {second} in {taus}")
    return result


def nash_suite(options):
    """Pure equilibria of the deterministic game sit at the extreme profiles."""
    result = SuiteResult('nash')
    rng = np.random.default_rng(options.seed)
    for n_agents in range(2, 7):
        extremes = {ActionProfile.all_zeros(n_agents), ActionProfile.all_ones(n_agents)}
        for x in rng.uniform(0.0, 6.0, 100):
            params = ModelParams(1, 1.0, 5.0, 1, float(rng.uniform(0.5, 5.0)), n_agents)
            equilibria = pure_nash_set(float(x), params)
            result.check(bool(equilibria) and equilibria <= extremes,
                         f"NE set {sorted(map(str, equilibria))} at x={x:.6g} for {params}")
    return result


def normalization_suite(options):
    """Probability mass functions sum to one and the cdf paths agree."""
    result = SuiteResult('normalization')
    for k, theta, lam in GRID:
        params = ModelParams(k, theta, lam, 1, 1.0)
        y_max = signal_support_bound(params)
        total = float(np.sum(marginal_signal_pmf(np.arange(y_max + 1), params)))
        result.check(abs(total - 1.0) < 1e-10, f"marginal pmf sums to {total!r} for {params}")
        for y in (0, 3, 10):
            mass = float(np.sum(cross_belief_pmf(np.arange(y_max + 10 * y + 1), y, params)))
            result.check(abs(mass - 1.0) < 1e-9, f"cross belief pmf at y={y} sums to {mass!r} for {params}")
        rates = lam * np.array([0.01, 0.5, 2.0, 10.0, 40.0])
        for tau, swept in poisson_cdf_sweep(60, rates):
            result.check(np.allclose(swept, poisson_cdf(tau, rates), rtol=1e-8, atol=1e-14),
                         f"cdf sweep differs at tau={tau} for lambda={lam}")
    return result


def oracle_suite(options):
    """Closed forms checked against the reference values and Monte Carlo."""
    result = SuiteResult('oracles')
    for row, expected, tolerance in zip(REFERENCE_ROWS[::3], (11 / 36, 2.592, 18.97), (1e-14, 1e-3, 1e-2)):
        gain = critical_gain_infinite(row_params(row))
        result.check(abs(gain - expected) <= tolerance, f"critical gain {gain!r} for {row}")
    for row in REFERENCE_ROWS:
        params = row_params(row)
        result.check(tau_certainty_equivalence(params) == row.tau_ce, f"tau_ce for {row}")
        result.check(tau_certainty_equivalence(params, closed_form=False) == row.tau_ce, f"scanned tau_ce for {row}")
        result.check(math.isclose(tau_omniscient(params), row.tau_omni), f"tau_omni for {row}")
        endpoints = mfpf_endpoints(params)
        for tau, value in ((0, endpoints.at_zero), (10_000, endpoints.at_infinity)):
            estimate = mfpf_estimate(tau, params, options.n_samples, options.seed, options.workers)
            result.check(estimate.within(value, STAT_SIGMAS), f"potential at tau={tau}: {estimate} vs {value!r}")

    rng = np.random.default_rng(options.seed)
    for params in (ModelParams(1, 1.0, 5.0, 1, 1.0), ModelParams(2, 0.5, 2.0, 1, 1.0)):
        x = rng.gamma(params.k, 1.0 / params.theta, options.n_samples)
        signals = rng.poisson(params.lam * x)
        for y in (0, 1, 3, 10):
            draws = x[signals == y]
            if len(draws) < 2:
                result.check(False, f"no draws with Y={y} for {params}")
                continue
            stderr = draws.std(ddof=1) / math.sqrt(len(draws))
            expected = posterior_of_state(y, params).mean
            result.check(abs(draws.mean() - expected) <= STAT_SIGMAS * stderr,
                         f"E[X | Y={y}] = {draws.mean():.6g}, expected {expected:.6g} for {params}")
    return result


SUITES = {
    'monotonicity': monotonicity_suite,
    'potential': potential_suite,
    'nash': nash_suite,
    'normalization': normalization_suite,
    'oracles': oracle_suite,
}


def run_suites(names, options):
    results = []
    for name in names:
        result = SUITES[name](options)
        logger.info("Suite %s: %d checks, %d failures", name, result.checks, len(result.failures))
        results.append(result)
    return results


def flipped_cost(y, params):
    """Cost estimate with its sign flipped, for checking that the suites catch faults."""
    return -np.asarray(cost_estimate(y, params))


FAULTS = {
    'cost-sign': {'cost_fn': flipped_cost},
}
