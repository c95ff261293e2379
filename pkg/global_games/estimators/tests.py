"""
Tests for the estimators app.
"""
import math
from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase

from common.exceptions import (
    DomainError, IndexOutOfRange, MixedKindProfile, ParameterError, ProfileLengthMismatch,
)
from gamma_poisson.distributions import cross_belief_pmf
from gamma_poisson.models import INFINITE_AGENTS, ModelParams
from .estimates import (
    activation_belief, belief_high, belief_low, benefit_estimate, cost_estimate, first_regular_signal,
)
from .models import Bound, PolicyKind, ThresholdPolicy, ThresholdProfile, policy_kind_for
from .serializers import ThresholdProfileSerializer

GRID = [
    (k, theta, lam)
    for k in (1, 2, 3)
    for theta in (0.1, 0.5, 1.0)
    for lam in (1.0, 2.0, 5.0)
]
NEAR_ONE = 1.0 - 1e-12


def exact_belief_low(y, tau, k, theta, lam):
    success = (Fraction(theta) + Fraction(lam)) / (Fraction(theta) + 2 * Fraction(lam))
    r = k + y
    return sum(math.comb(ell + r - 1, ell) * success ** r * (1 - success) ** ell for ell in range(tau + 1))


def assert_monotone(test, values, increasing):
    """Non-strict everywhere, strict wherever both neighbours are away from 0 and 1."""
    steps = np.diff(values) if increasing else -np.diff(values)
    test.assertTrue(np.all(steps >= 0), "monotonicity violated")
    interior = (values[:-1] > 1e-300) & (values[1:] > 1e-300) & (values[:-1] < NEAR_ONE) & (values[1:] < NEAR_ONE)
    test.assertTrue(np.all(steps[interior] > 0), "strict monotonicity violated")


class ThresholdPolicyTests(SimpleTestCase):
    def test_sentinel_minus_one(self):
        self.assertEqual(ThresholdPolicy.from_value('low', -1).tau, Bound.NEVER)
        self.assertEqual(ThresholdPolicy.from_value('high', -1).tau, Bound.ALWAYS)
        self.assertEqual(ThresholdPolicy.from_value('low', '-1').to_value(), 'never')

    def test_kind_specific_sentinels(self):
        with self.assertRaises(ParameterError):
            ThresholdPolicy(PolicyKind.LOW, Bound.ALWAYS)
        with self.assertRaises(ParameterError):
            ThresholdPolicy(PolicyKind.HIGH, 'never')
        with self.assertRaises(ParameterError):
            ThresholdPolicy(PolicyKind.LOW, -3)

    def test_non_finite_thresholds(self):
        for tau in (float('inf'), float('nan'), 2.5, None, True):
            with self.subTest(tau=tau), self.assertRaises(ParameterError):
                ThresholdPolicy(PolicyKind.LOW, tau)
        self.assertEqual(ThresholdPolicy(PolicyKind.LOW, 3.0).tau, 3)
        self.assertEqual(ThresholdPolicy(PolicyKind.HIGH, np.int64(4)).tau, 4)

    def test_activation_sets(self):
        signals = np.arange(6)
        np.testing.assert_array_equal(ThresholdPolicy('low', 2).activates(signals), signals <= 2)
        np.testing.assert_array_equal(ThresholdPolicy('high', 2).activates(signals), signals > 2)
        self.assertTrue(ThresholdPolicy('low', 'inf').activates(signals).all())
        self.assertFalse(ThresholdPolicy('high', 'inf').activates(signals).any())
        self.assertFalse(ThresholdPolicy('low', 'never').activates(signals).any())
        self.assertTrue(ThresholdPolicy('high', 'always').activates(signals).all())

    def test_conditional_activation_complements(self):
        rates = np.array([0.5, 3.0, 20.0])
        low = ThresholdPolicy('low', 4).activation_given_rate(rates)
        high = ThresholdPolicy('high', 4).activation_given_rate(rates)
        np.testing.assert_allclose(low + high, 1.0, atol=1e-15)

    def test_order_key(self):
        keys = [ThresholdPolicy('low', tau).order_key for tau in ('never', 0, 7, 'inf')]
        self.assertEqual(keys, sorted(keys))

    def test_policy_kind_follows_sign(self):
        self.assertEqual(policy_kind_for(ModelParams(1, 1.0, 5.0, 1, 2.0)), PolicyKind.LOW)
        self.assertEqual(policy_kind_for(ModelParams(1, 1.0, 5.0, -1, 2.0)), PolicyKind.HIGH)


class ThresholdProfileTests(SimpleTestCase):
    def test_mixed_kinds_rejected(self):
        with self.assertRaises(MixedKindProfile):
            ThresholdProfile((ThresholdPolicy('low', 1), ThresholdPolicy('high', 1)))

    def test_without_and_replace(self):
        profile = ThresholdProfile.from_taus('low', [0, 3, 'inf'])
        self.assertEqual(profile.without(1).taus, (0, 'inf'))
        self.assertEqual(profile.replace(0, ThresholdPolicy('low', 5)).taus, (5, 3, 'inf'))
        self.assertEqual(profile.without(2).insert(2, profile[2]), profile)
        with self.assertRaises(IndexOutOfRange):
            profile.without(3)

    def test_homogeneity(self):
        self.assertTrue(ThresholdProfile.homogeneous('low', 4, 3).is_homogeneous)
        self.assertFalse(ThresholdProfile.from_taus('low', [4, 5]).is_homogeneous)

    def test_actions(self):
        profile = ThresholdProfile.from_taus('low', [1, 'never', 'inf'])
        signals = np.array([[0, 0, 9], [2, 1, 0]])
        np.testing.assert_array_equal(profile.actions(signals), [[1, 0, 1], [0, 0, 1]])

    def test_serializer(self):
        profile = ThresholdProfile.from_taus('high', [2, 'always', 'inf'])
        data = ThresholdProfileSerializer(profile).data
        self.assertEqual(dict(data), {'kind': 'high', 'taus': [2, 'always', 'inf']})
        serializer = ThresholdProfileSerializer(data={'kind': 'low', 'taus': [0, -1, '3']})
        self.assertTrue(serializer.is_valid(), serializer.errors)
        self.assertEqual(serializer.save().taus, (0, 'never', 3))

    def test_serializer_rejects_bad_sentinel(self):
        serializer = ThresholdProfileSerializer(data={'kind': 'low', 'taus': [0, 'always']})
        self.assertFalse(serializer.is_valid())
        serializer = ThresholdProfileSerializer(data={'kind': 'low', 'taus': [1.5]})
        self.assertFalse(serializer.is_valid())


class CostEstimateTests(SimpleTestCase):
    def test_examples(self):
        self.assertAlmostEqual(cost_estimate(0, ModelParams(1, 1.0, 5.0, 1, 1.0)), 1 / 6, places=15)
        self.assertAlmostEqual(cost_estimate(0, ModelParams(2, 0.1, 3.0, -1, 1.0)), 3.1, places=14)
        self.assertAlmostEqual(cost_estimate(4, ModelParams(1, 0.1, 3.0, 2, 1.0)), 30 / 9.61, places=12)

    def test_unit_exponent_closed_forms(self):
        params = ModelParams(2, 0.5, 2.0, 1, 1.0)
        for y in range(40):
            self.assertAlmostEqual(cost_estimate(y, params), (y + 2) / 2.5, places=12)
        params = ModelParams(3, 0.1, 1.0, -1, 1.0)
        for y in range(40):
            self.assertAlmostEqual(cost_estimate(y, params), 1.1 / (y + 2), places=12)

    def test_pole_region(self):
        params = ModelParams(1, 1.0, 5.0, -2, 1.0)
        self.assertEqual(first_regular_signal(params), 2)
        with self.assertRaises(DomainError):
            cost_estimate(1, params)
        with self.assertRaises(DomainError):
            cost_estimate(-1, ModelParams(1, 1.0, 5.0, 1, 1.0))

    def test_vectorized(self):
        params = ModelParams(1, 1.0, 5.0, 1, 2.0)
        np.testing.assert_allclose(cost_estimate(np.arange(4), params), np.arange(1, 5) / 6)

    def test_strictly_increasing_for_positive_exponent(self):
        for k, theta, lam in GRID:
            for p in (1, 2):
                values = cost_estimate(np.arange(501), ModelParams(k, theta, lam, p, 1.0))
                self.assertTrue(np.all(np.diff(values) > 0), (k, theta, lam, p))

    def test_strictly_decreasing_for_negative_exponent(self):
        for k, theta, lam in GRID:
            for p in (-1, -2):
                params = ModelParams(k, theta, lam, p, 1.0)
                values = cost_estimate(np.arange(first_regular_signal(params), 501), params)
                self.assertTrue(np.all(np.diff(values) < 0), (k, theta, lam, p))


class BeliefTests(SimpleTestCase):
    def test_examples(self):
        params = ModelParams(1, 1.0, 5.0, 1, 1.0)
        self.assertAlmostEqual(belief_low(0, 0, params), 6 / 11, places=14)
        self.assertAlmostEqual(belief_high(0, 0, params), 5 / 11, places=14)
        self.assertEqual(belief_low(17, 'inf', params), 1.0)
        self.assertEqual(belief_high(17, 'inf', params), 0.0)
        self.assertEqual(belief_low(17, Bound.NEVER, params), 0.0)
        self.assertEqual(belief_high(17, Bound.ALWAYS, params), 1.0)

    def test_partial_sum_oracle(self):
        params = ModelParams(2, 0.5, 2.0, 1, 1.0)
        exact = float(exact_belief_low(3, 5, 2, Fraction(1, 2), 2))
        self.assertAlmostEqual(belief_low(3, 5, params), exact, delta=1e-14)
        self.assertAlmostEqual(belief_high(3, 5, params), 1 - exact, delta=1e-14)

    def test_complement(self):
        params = ModelParams(3, 0.1, 1.0, 1, 1.0)
        signals = np.arange(60)
        for tau in (0, 4, 25):
            np.testing.assert_allclose(belief_low(signals, tau, params) + belief_high(signals, tau, params), 1.0)

    def test_increments_in_tau(self):
        params = ModelParams(2, 0.5, 2.0, 1, 1.0)
        for y in (0, 6, 40):
            for tau in range(30):
                step = belief_low(y, tau + 1, params) - belief_low(y, tau, params)
                self.assertAlmostEqual(step, cross_belief_pmf(tau + 1, y, params), delta=1e-14)

    def test_monotone_in_signal_over_grid(self):
        signals = np.arange(301)
        for k, theta, lam in GRID:
            params = ModelParams(k, theta, lam, 1, 1.0)
            for tau in range(51):
                assert_monotone(self, belief_low(signals, tau, params), increasing=False)
                assert_monotone(self, belief_high(signals, tau, params), increasing=True)

    def test_limits(self):
        for k, theta, lam in GRID:
            params = ModelParams(k, theta, lam, 1, 1.0)
            for tau in (0, 10, 50):
                self.assertLess(belief_low(1000, tau, params), 1e-6)
                self.assertGreater(belief_high(1000, tau, params), 1 - 1e-6)

    def test_activation_belief_dispatch(self):
        params = ModelParams(1, 1.0, 5.0, 1, 1.0)
        self.assertEqual(activation_belief(2, ThresholdPolicy('low', 3), params), belief_low(2, 3, params))
        self.assertEqual(activation_belief(2, ThresholdPolicy('high', 3), params), belief_high(2, 3, params))


class BenefitEstimateTests(SimpleTestCase):
    def setUp(self):
        self.params = ModelParams(1, 1.0, 5.0, 1, 2.0, 3)

    def test_example(self):
        others = ThresholdProfile.homogeneous('low', 0, 2)
        self.assertAlmostEqual(benefit_estimate(0, others, self.params), 50 / 33, places=14)

    def test_extremes(self):
        everyone = ThresholdProfile.homogeneous('low', 'inf', 2)
        nobody = ThresholdProfile.homogeneous('low', 'never', 2)
        self.assertAlmostEqual(benefit_estimate(9, everyone, self.params), 2.0, places=15)
        self.assertAlmostEqual(benefit_estimate(9, nobody, self.params), 2 / 3, places=15)

    def test_fast_path_matches_loop(self):
        homogeneous = ThresholdProfile.homogeneous('low', 4, 2)
        looped = (2 / 3) * (sum(belief_low(5, 4, self.params) for _ in range(2)) + 1)
        self.assertAlmostEqual(benefit_estimate(5, homogeneous, self.params), looped, places=14)

    def test_length_mismatch(self):
        with self.assertRaises(ProfileLengthMismatch):
            benefit_estimate(0, ThresholdProfile.homogeneous('low', 0, 3), self.params)

    def test_needs_finite_agents(self):
        with self.assertRaises(ParameterError):
            benefit_estimate(0, ThresholdProfile.homogeneous('low', 0, 1), self.params.with_agents(INFINITE_AGENTS))

    def test_monotone_and_bounded(self):
        signals = np.arange(201)
        for kind, increasing in (('low', False), ('high', True)):
            params = ModelParams(2, 0.5, 2.0, 1 if kind == 'low' else -1, 5.0, 4)
            values = benefit_estimate(signals, ThresholdProfile.from_taus(kind, [0, 3, 10]), params)
            steps = np.diff(values) if increasing else -np.diff(values)
            self.assertTrue(np.all(steps >= 0))
            self.assertTrue(np.all(steps[:30] > 0))
            self.assertTrue(np.all(values >= params.g / 4 - 1e-12))
            self.assertTrue(np.all(values <= params.g + 1e-12))

    def test_limits(self):
        for k, theta, lam in GRID:
            low = ModelParams(k, theta, lam, 1, 3.0, 5)
            high = ModelParams(k, theta, lam, -1, 3.0, 5)
            self.assertAlmostEqual(benefit_estimate(1000, ThresholdProfile.homogeneous('low', 20, 4), low), 0.6, delta=1e-6)
            self.assertAlmostEqual(benefit_estimate(1000, ThresholdProfile.homogeneous('high', 20, 4), high), 3.0, delta=1e-6)
