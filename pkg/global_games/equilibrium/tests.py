"""
Tests for the equilibrium app.
"""
import itertools
import math
from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase, tag

from common.exceptions import (
    DegenerateBound, IndexOutOfRange, KindMismatch, QuadratureFailure, TooManyAgents, WrongSign,
)
from estimators.estimates import benefit_estimate, cost_estimate
from estimators.models import Bound, PolicyKind, ThresholdPolicy, ThresholdProfile
from gamma_poisson.models import INFINITE_AGENTS, ModelParams
from .best_response import best_response_dynamics, best_response_threshold
from .conditions import (
    high_activation_bound, sufficient_condition_high, sufficient_condition_low, threshold_upper_bound,
)
from .deterministic import (
    congestion_potential, deterministic_potential, deterministic_utility, omniscient_action,
    omniscient_threshold, potential_offset, pure_nash_set,
)
from .expected import (
    expected_potential, expected_threshold_utility, quadrature_deviation_audit,
)
from .models import ActionProfile, QuadratureSpec
from .serializers import BestResponseResultSerializer, DynamicsResultSerializer, QuadratureAuditSerializer

SIGMAS = 4.0
# the second reference row
ROW_TWO = ModelParams(1, 1.0, 5.0, 1, 2.0)


def game(n_agents, g=2.0, p=1, k=1, theta=1.0, lam=5.0):
    return ModelParams(k, theta, lam, p, g, n_agents)


class DeterministicGameTests(SimpleTestCase):
    def test_omniscient_action(self):
        self.assertEqual(omniscient_action(0.5, game(2)), 1)
        self.assertEqual(omniscient_action(3, game(2)), 0)
        self.assertEqual(omniscient_action(0.4, game(2, p=-1)), 0)
        self.assertEqual(omniscient_action(0.0, game(2, p=-1)), 0)

    def test_omniscient_threshold(self):
        self.assertEqual(omniscient_threshold(game(2, g=4.0, p=2)), (2.0, PolicyKind.LOW))
        cutoff, kind = omniscient_threshold(game(2, g=2.0, p=-1))
        self.assertAlmostEqual(cutoff, 0.5)
        self.assertEqual(kind, PolicyKind.HIGH)

    def test_utility_examples(self):
        self.assertEqual(deterministic_utility(1, (1, 0), 0.5, game(2)), 0.0)
        self.assertAlmostEqual(deterministic_utility(0, (1, 1), 0.5, game(2)), 1.5)
        self.assertAlmostEqual(deterministic_utility(2, (1, 0, 1), 2.0, game(3, g=3.0, p=-1)), 1.5)
        with self.assertRaises(IndexOutOfRange):
            deterministic_utility(2, (1, 1), 0.5, game(2))

    def test_potential_examples(self):
        self.assertEqual(congestion_potential((0, 0, 0), 1.3, game(3)), 0.0)
        self.assertAlmostEqual(deterministic_potential((1, 1), 0.5, game(2)), 1.5, places=14)
        self.assertAlmostEqual(congestion_potential((1, 1), 0.5, game(2)), 2.0, places=14)

    def test_potential_at_zero_state_with_negative_exponent(self):
        params = game(2, p=-1)
        self.assertEqual(deterministic_potential((1, 0), 0.0, params), 0.0)
        self.assertEqual(deterministic_potential((1, 1), 0.0, params), -math.inf)
        self.assertEqual(deterministic_potential((0, 0), 0.0, params), math.inf)

    def test_single_flip_identity(self):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            n_agents = int(rng.integers(2, 9))
            params = game(n_agents, g=float(rng.uniform(0.5, 5.0)), p=int(rng.choice([1, -1])))
            x = float(rng.uniform(0.1, 10.0))
            others = tuple(int(a) for a in rng.integers(0, 2, n_agents))
            i = int(rng.integers(n_agents))
            on = ActionProfile(others).with_action(i, 1)
            off = ActionProfile(others).with_action(i, 0)
            delta_u = deterministic_utility(i, on, x, params) - deterministic_utility(i, off, x, params)
            for potential in (deterministic_potential, congestion_potential):
                delta_phi = potential(on, x, params) - potential(off, x, params)
                self.assertLess(abs(delta_phi - delta_u), 1e-12)

    def test_forms_differ_by_a_constant(self):
        for n_agents in range(2, 9):
            params = game(n_agents, g=3.0)
            for x in (0.2, 1.0, 4.5):
                gaps = [
                    deterministic_potential(a, x, params) - congestion_potential(a, x, params)
                    for a in itertools.product((0, 1), repeat=n_agents)
                ]
                self.assertLess(max(gaps) - min(gaps), 1e-12)
                self.assertAlmostEqual(gaps[0], potential_offset(x, params), places=12)

    def test_nash_examples(self):
        zeros, ones = ActionProfile.all_zeros(2), ActionProfile.all_ones(2)
        self.assertEqual(pure_nash_set(0.5, game(2)), {ones})
        self.assertEqual(pure_nash_set(3.0, game(2)), {zeros})
        self.assertEqual(pure_nash_set(1.5, game(2)), {zeros, ones})

    def test_nash_inclusion(self):
        rng = np.random.default_rng(11)
        for n_agents in range(2, 7):
            for x in rng.uniform(0.0, 6.0, 100):
                params = game(n_agents, g=float(rng.uniform(0.5, 5.0)))
                extremes = {ActionProfile.all_zeros(n_agents), ActionProfile.all_ones(n_agents)}
                equilibria = pure_nash_set(float(x), params)
                self.assertTrue(equilibria)
                self.assertLessEqual(equilibria, extremes)

    def test_enumeration_guard(self):
        with self.assertRaises(TooManyAgents):
            pure_nash_set(1.0, game(21))


class SufficientConditionTests(SimpleTestCase):
    def test_low_examples(self):
        result = sufficient_condition_low(game(2))
        self.assertAlmostEqual(result.critical_gain, 11 / 51, places=14)
        self.assertTrue(result.holds)
        self.assertAlmostEqual(sufficient_condition_low(game(10 ** 6)).critical_gain, 11 / 36, places=6)
        self.assertAlmostEqual(sufficient_condition_low(game(INFINITE_AGENTS)).critical_gain, 11 / 36, places=14)

    def test_low_boundary_is_strict(self):
        params = game(2)
        at_boundary = params.with_gain(sufficient_condition_low(params).critical_gain)
        self.assertFalse(sufficient_condition_low(at_boundary).holds)

    def test_high_example(self):
        result = sufficient_condition_high(game(2, p=-1))
        self.assertAlmostEqual(result.critical_gain, float(Fraction(726, 85)), places=12)
        self.assertTrue(result.holds)
        self.assertFalse(sufficient_condition_high(game(2, g=9.0, p=-1)).holds)

    def test_sign_and_degeneracy(self):
        with self.assertRaises(WrongSign):
            sufficient_condition_low(game(2, p=-1))
        with self.assertRaises(WrongSign):
            sufficient_condition_high(game(2))
        with self.assertRaises(DegenerateBound):
            sufficient_condition_high(ModelParams(1, 100.0, 1.0, -2, 1.0, 10))

    def test_threshold_upper_bound(self):
        self.assertEqual(threshold_upper_bound(ROW_TWO), 10)
        self.assertEqual(threshold_upper_bound(ROW_TWO.with_gain(1 / 12)), Bound.NEVER)
        params = ModelParams(3, 0.1, 1.0, 1, 60.0)
        oracle = max(y for y in range(500) if cost_estimate(y, params) < 60.0)
        self.assertEqual(threshold_upper_bound(params), oracle)
        with self.assertRaises(WrongSign):
            threshold_upper_bound(game(2, p=-1))

    def test_high_activation_bound(self):
        params = game(3, p=-1)
        y_hi = high_activation_bound(params)
        self.assertLess(cost_estimate(y_hi, params), params.g / 3)
        self.assertGreaterEqual(cost_estimate(y_hi - 1, params), params.g / 3)


class BestResponseTests(SimpleTestCase):
    def test_everyone_else_always_active(self):
        result = best_response_threshold(0, ThresholdProfile.homogeneous('low', 'inf', 1), game(2))
        self.assertEqual(result.tau_star, 10)
        self.assertEqual(result.tau_star, threshold_upper_bound(ROW_TWO))

    def test_never_when_cost_dominates(self):
        result = best_response_threshold(0, ThresholdProfile.homogeneous('low', 'never', 1), game(2, g=0.1))
        self.assertEqual(result.policy.tau, Bound.NEVER)
        self.assertEqual(result.tau_star, 'never')

    def test_scan_against_belief_oracle(self):
        result = best_response_threshold(1, ThresholdProfile.homogeneous('low', 0, 1), game(2))
        oracle = max(y for y in range(40) if 1 + Fraction(6, 11) ** (1 + y) > Fraction(y + 1, 6))
        self.assertEqual(result.tau_star, oracle)
        self.assertEqual(oracle, 5)

    def test_crossing_diagnostics(self):
        result = best_response_threshold(0, ThresholdProfile.from_taus('low', [0, 4]), game(3))
        points = {point.y: point for point in result.diagnostics}
        self.assertTrue(points[result.tau_star].activates)
        self.assertFalse(points[result.tau_star + 1].activates)
        data = BestResponseResultSerializer(result).data
        self.assertEqual(data['tau_star'], result.tau_star)
        self.assertEqual(len(data['diagnostics']), result.tau_star + 2)

    def test_single_crossing_and_upper_bound_dominance(self):
        rng = np.random.default_rng(5)
        for _ in range(40):
            n_agents = int(rng.integers(2, 6))
            params = game(n_agents, g=float(rng.uniform(0.4, 4.0)), k=int(rng.integers(1, 4)),
                          theta=float(rng.uniform(0.1, 1.0)), lam=float(rng.uniform(1.0, 5.0)))
            taus = [int(t) if t >= 0 else 'inf' for t in rng.integers(-1, 15, n_agents - 1)]
            others = ThresholdProfile.from_taus('low', taus)
            result = best_response_threshold(0, others, params)
            t_bar = threshold_upper_bound(params)
            if t_bar == Bound.NEVER:
                self.assertEqual(result.policy.tau, Bound.NEVER)
                continue
            self.assertLessEqual(result.policy.order_key, t_bar)
            ys = np.arange(t_bar + 2)
            signs = benefit_estimate(ys, others, params) > cost_estimate(ys, params)
            self.assertLessEqual(np.count_nonzero(signs[1:] != signs[:-1]), 1)

    def test_high_threshold(self):
        params = game(3, p=-1)
        result = best_response_threshold(0, ThresholdProfile.homogeneous('high', 2, 2), params)
        tau = result.tau_star
        others = ThresholdProfile.homogeneous('high', 2, 2)
        self.assertLessEqual(benefit_estimate(tau, others, params), cost_estimate(tau, params))
        ys = np.arange(tau + 1, high_activation_bound(params) + 5)
        self.assertTrue(np.all(benefit_estimate(ys, others, params) > cost_estimate(ys, params)))

    def test_high_threshold_pole_region(self):
        params = game(3, p=-2, g=50.0)
        result = best_response_threshold(0, ThresholdProfile.homogeneous('high', 'always', 2), params)
        self.assertEqual(result.pole_end, 2)
        self.assertGreaterEqual(result.tau_star, 1)
        self.assertEqual(BestResponseResultSerializer(result).data['diagnostics'][0]['cost'], None)

    def test_kind_mismatch(self):
        with self.assertRaises(KindMismatch):
            best_response_threshold(0, ThresholdProfile.homogeneous('high', 0, 1), game(2))


class DynamicsTests(SimpleTestCase):
    def test_converges_to_audited_equilibrium(self):
        for n_agents in (2, 3, 4):
            params = ROW_TWO.with_agents(n_agents)
            result = best_response_dynamics(ThresholdProfile.homogeneous('low', 0, n_agents), params, max_rounds=20)
            self.assertTrue(result.converged)
            self.assertLessEqual(result.rounds, 20)
            self.assertTrue(quadrature_deviation_audit(result.profile, params).passed)

    def test_never_is_a_fixed_point_below_critical_gain(self):
        params = game(2, g=0.2)
        self.assertFalse(sufficient_condition_low(params).holds)
        result = best_response_dynamics(ThresholdProfile.homogeneous('low', 'never', 2), params)
        self.assertTrue(result.converged)
        self.assertEqual(result.rounds, 1)
        self.assertEqual(result.profile.taus, ('never', 'never'))
        self.assertFalse(result.condition_holds)

    def test_round_limit(self):
        result = best_response_dynamics(ThresholdProfile.homogeneous('low', 0, 3), game(3), max_rounds=1)
        self.assertFalse(result.converged)
        self.assertEqual(result.rounds, 1)

    def test_trace_from_unbounded_start(self):
        seen = []
        result = best_response_dynamics(
            ThresholdProfile.homogeneous('low', 'inf', 3), game(3), max_rounds=20, on_round=seen.append,
        )
        self.assertTrue(result.converged)
        self.assertEqual(len(result.trace), result.rounds + 1)
        self.assertEqual(seen, list(result.trace[1:]))
        data = DynamicsResultSerializer(result).data
        self.assertEqual(data['profile']['taus'], list(result.profile.taus))
        self.assertEqual(data['monotone'], len(data['monotone_agents']) == 3)


class ExpectedUtilityTests(SimpleTestCase):
    def test_never_activating_agent(self):
        profile = ThresholdProfile.from_taus('low', ['never', 3, 3])
        self.assertEqual(expected_threshold_utility(0, profile, game(3)), 0.0)

    def test_everyone_always_active(self):
        params = game(3)
        profile = ThresholdProfile.homogeneous('low', 'inf', 3)
        self.assertAlmostEqual(expected_threshold_utility(1, profile, params), params.g - 1.0, delta=1e-8)

    def test_infinite_expected_cost(self):
        # E[X^-1] diverges under an exponential prior
        params = game(2, p=-1)
        strict = QuadratureSpec.from_settings(mc_fallback=False)
        always = ThresholdProfile.homogeneous('high', 'always', 2)
        self.assertEqual(expected_threshold_utility(0, always, params, strict), -math.inf)
        self.assertEqual(expected_potential(always, params, strict), -math.inf)
        self.assertEqual(expected_potential(ThresholdProfile.homogeneous('high', 0, 2), params, strict), math.inf)
        finite = expected_threshold_utility(0, ThresholdProfile.homogeneous('high', 0, 2), params, strict)
        self.assertTrue(math.isfinite(finite))
        self.assertTrue(math.isfinite(expected_threshold_utility(0, always, game(2, p=-1, k=2), strict)))

    def test_audit_of_infinite_cost_profile(self):
        audit = quadrature_deviation_audit(ThresholdProfile.homogeneous('high', 'always', 2), game(2, p=-1))
        self.assertFalse(audit.passed)
        self.assertEqual(audit.max_gain, math.inf)
        self.assertIsNone(QuadratureAuditSerializer(audit).data['max_gain'])

    def test_monte_carlo_cross_check(self):
        params = game(3)
        rng = np.random.default_rng(3)
        n = 2 * 10 ** 5
        x = rng.gamma(1, 1.0, n)
        y = rng.poisson(5.0 * x[:, None], (n, 3))
        active = y <= 5
        utility = active[:, 0] * (params.g / 3 * active.sum(axis=1) - x)
        estimate, stderr = utility.mean(), utility.std(ddof=1) / math.sqrt(n)
        value = expected_threshold_utility(0, ThresholdProfile.homogeneous('low', 5, 3), params)
        self.assertAlmostEqual(value, estimate, delta=SIGMAS * stderr)

    def test_potential_baseline(self):
        params = game(3)
        profile = ThresholdProfile.homogeneous('low', 'never', 3)
        self.assertAlmostEqual(expected_potential(profile, params), -1.0 + 1.5, delta=1e-8)

    def _check_potential_identity(self, n_instances, seed):
        rng = np.random.default_rng(seed)
        choices = ['never', 'inf'] + list(range(13))
        for _ in range(n_instances):
            n_agents = int(rng.integers(2, 5))
            params = ROW_TWO.with_agents(n_agents)
            taus = [choices[j] for j in rng.integers(len(choices), size=n_agents)]
            i = int(rng.integers(n_agents))
            first, second = (choices[j] for j in rng.integers(len(choices), size=2))
            profile_a = ThresholdProfile.from_taus('low', taus).replace(i, ThresholdPolicy('low', first))
            profile_b = profile_a.replace(i, ThresholdPolicy('low', second))
            delta_u = (expected_threshold_utility(i, profile_a, params)
                       - expected_threshold_utility(i, profile_b, params))
            delta_phi = expected_potential(profile_a, params) - expected_potential(profile_b, params)
            self.assertAlmostEqual(delta_u, delta_phi, delta=1e-6)

    def test_exact_potential_identity(self):
        self._check_potential_identity(20, 13)

    @tag('slow')
    def test_exact_potential_identity_many(self):
        self._check_potential_identity(200, 17)

    def test_quadrature_failure(self):
        params = game(3)
        profile = ThresholdProfile.homogeneous('low', 'inf', 3)
        strict = QuadratureSpec.from_settings(rtol=1e-13, atol=0.0, limit=1, mc_fallback=False)
        with self.assertRaises(QuadratureFailure):
            expected_threshold_utility(0, profile, params, strict)
        fallback = QuadratureSpec.from_settings(rtol=1e-13, atol=0.0, limit=1, fallback_samples=10 ** 5, seed=4)
        value = expected_threshold_utility(0, profile, params, fallback)
        self.assertAlmostEqual(value, 1.0, delta=SIGMAS / math.sqrt(10 ** 5))

    def test_audit_flags_profitable_deviation(self):
        params = ROW_TWO.with_agents(3)
        audit = quadrature_deviation_audit(ThresholdProfile.homogeneous('low', 'never', 3), params)
        self.assertFalse(audit.passed)
        self.assertGreater(audit.max_gain, 0.0)
