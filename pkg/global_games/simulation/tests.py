"""
Tests for the simulation app.
"""
import numpy as np
from django.test import SimpleTestCase, override_settings, tag

from common.exceptions import IndexOutOfRange, ParameterError, TooFewSamples, TooManyAgents
from equilibrium.best_response import best_response_dynamics
from equilibrium.deterministic import deterministic_utility
from equilibrium.expected import expected_threshold_utility, quadrature_deviation_audit
from estimators.models import Bound, PolicyKind, ThresholdPolicy, ThresholdProfile
from gamma_poisson.distributions import marginal_signal_pmf
from gamma_poisson.models import ModelParams
from .audits import (
    activation_frequencies, deviation_audit, empirical_activation_probability, realized_utility_estimate,
)
from .sampling import payoffs, sample_batch, sample_realization
from .serializers import DeviationAuditReportSerializer, GameRealizationSerializer

SIGMAS = 4.0
FAST_SAMPLES = 200_000


def row_two(n_agents):
    return ModelParams(1, 1.0, 5.0, 1, 2.0, n_agents)


class SamplingTests(SimpleTestCase):
    def test_never_profile_is_idle(self):
        profile = ThresholdProfile.homogeneous(PolicyKind.LOW, Bound.NEVER, 3)
        realization = sample_realization(profile, row_two(3), 4)
        self.assertEqual(realization.actions, (0, 0, 0))
        self.assertEqual(realization.utilities, (0.0, 0.0, 0.0))
        self.assertEqual(realization.n_agents, 3)

    def test_utilities_follow_the_payoff(self):
        params = ModelParams(2, 0.5, 2.0, 2, 5.0, 4)
        profile = ThresholdProfile.from_taus(PolicyKind.LOW, [1, 3, 5, 'inf'])
        batch = sample_batch(profile, params, 1000, seed=2)
        for index in range(50):
            realization = batch[index]
            for i in range(4):
                self.assertAlmostEqual(
                    realization.utilities[i],
                    deterministic_utility(i, realization.actions, realization.x, params),
                    places=10,
                )

    def test_high_profile_payoffs(self):
        params = ModelParams(3, 1.0, 2.0, -1, 1.0, 2)
        actions = np.array([[1, 0], [1, 1], [0, 0]])
        x = np.array([0.5, 2.0, 0.0])
        expected = np.array([[0.5 - 2.0, 0.0], [1.0 - 0.5, 1.0 - 0.5], [0.0, 0.0]])
        np.testing.assert_allclose(payoffs(actions, x, params), expected)

    def test_signal_mean(self):
        params = row_two(2)
        profile = ThresholdProfile.homogeneous(PolicyKind.LOW, 5, 2)
        signals = sample_batch(profile, params, FAST_SAMPLES, seed=3).signals[:, 0]
        stderr = signals.std(ddof=1) / np.sqrt(len(signals))
        self.assertLess(abs(signals.mean() - 5.0), SIGMAS * stderr)

    def test_marginal_signal_distribution(self):
        params = row_two(2)
        profile = ThresholdProfile.homogeneous(PolicyKind.LOW, 5, 2)
        signals = sample_batch(profile, params, FAST_SAMPLES, seed=4).signals.ravel()
        counts = np.bincount(signals)
        pmf = marginal_signal_pmf(np.arange(len(counts)), params)
        distance = 0.5 * np.abs(counts / counts.sum() - pmf).sum() + 0.5 * (1.0 - pmf.sum())
        self.assertLess(distance, 0.01)

    def test_signals_are_exchangeable(self):
        params = ModelParams(2, 0.5, 2.0, 1, 5.0, 2)
        profile = ThresholdProfile.homogeneous(PolicyKind.LOW, 3, 2)
        signals = sample_batch(profile, params, FAST_SAMPLES, seed=5).signals
        joint = np.zeros((16, 16))
        kept = signals[(signals < 16).all(axis=1)]
        np.add.at(joint, (kept[:, 0], kept[:, 1]), 1)
        spread = np.sqrt(joint + joint.T)
        self.assertTrue(np.all(np.abs(joint - joint.T) <= SIGMAS * spread + 1e-12))

    def test_batch_is_reproducible(self):
        profile = ThresholdProfile.homogeneous(PolicyKind.LOW, 2, 3)
        first = sample_batch(profile, row_two(3), 5000, seed=9, workers=1)
        second = sample_batch(profile, row_two(3), 5000, seed=9, workers=3)
        np.testing.assert_array_equal(first.signals, second.signals)
        np.testing.assert_array_equal(first.utilities, second.utilities)

    def test_agent_cap(self):
        profile = ThresholdProfile.homogeneous(PolicyKind.LOW, 2, 3)
        with override_settings(GLOBAL_GAMES={'MAX_SIM_AGENTS': 2}):
            with self.assertRaises(TooManyAgents):
                sample_batch(profile, row_two(3), 1000)

    def test_needs_finite_agents(self):
        profile = ThresholdProfile.homogeneous(PolicyKind.LOW, 2, 3)
        with self.assertRaises(ParameterError):
            sample_realization(profile, row_two(3).with_agents(float('inf')), 1)

    def test_realization_serializer(self):
        profile = ThresholdProfile.homogeneous(PolicyKind.LOW, 'inf', 2)
        data = GameRealizationSerializer(sample_realization(profile, row_two(2), 7)).data
        self.assertEqual(data['actions'], [1, 1])
        self.assertEqual(len(data['signals']), 2)


class ActivationTests(SimpleTestCase):
    def test_geometric_example(self):
        profile = ThresholdProfile.homogeneous(PolicyKind.LOW, 5, 2)
        estimate = empirical_activation_probability(profile, row_two(2), FAST_SAMPLES, seed=1)
        self.assertTrue(estimate.within(1 - (5 / 6) ** 6, SIGMAS))

    def test_sentinels(self):
        always = ThresholdProfile.homogeneous(PolicyKind.LOW, 'inf', 3)
        never = ThresholdProfile.homogeneous(PolicyKind.LOW, 'never', 3)
        self.assertEqual(empirical_activation_probability(always, row_two(3), 1000, seed=1).mean, 1.0)
        self.assertEqual(empirical_activation_probability(never, row_two(3), 1000, seed=1).mean, 0.0)

    def test_needs_homogeneous_profile(self):
        profile = ThresholdProfile.from_taus(PolicyKind.LOW, [1, 2])
        with self.assertRaises(ParameterError):
            empirical_activation_probability(profile, row_two(2), 1000)

    def test_too_few_samples(self):
        profile = ThresholdProfile.homogeneous(PolicyKind.LOW, 1, 2)
        with self.assertRaises(TooFewSamples):
            empirical_activation_probability(profile, row_two(2), 10)

    def test_per_agent_frequencies(self):
        profile = ThresholdProfile.from_taus(PolicyKind.LOW, [0, 5, 'inf'])
        frequencies = activation_frequencies(profile, row_two(3), FAST_SAMPLES, seed=2)
        self.assertEqual(len(frequencies), 3)
        self.assertTrue(frequencies[0].within(1 / 6, SIGMAS))
        self.assertTrue(frequencies[1].within(1 - (5 / 6) ** 6, SIGMAS))
        self.assertEqual(frequencies[2].mean, 1.0)


class RealizedUtilityTests(SimpleTestCase):
    settings = (
        (row_two(3), PolicyKind.LOW, 5),
        (ModelParams(2, 0.5, 2.0, 1, 5.0, 4), PolicyKind.LOW, 3),
        (ModelParams(3, 0.1, 1.0, 1, 40.0, 2), PolicyKind.LOW, 16),
        (ModelParams(1, 1.0, 5.0, 2, 3.0, 3), PolicyKind.LOW, 4),
        (ModelParams(3, 1.0, 2.0, -1, 1.0, 3), PolicyKind.HIGH, 2),
    )

    def test_matches_quadrature(self):
        for params, kind, tau in self.settings:
            profile = ThresholdProfile.homogeneous(kind, tau, params.n_agents)
            with self.subTest(params=str(params)):
                estimate = realized_utility_estimate(profile, params, 0, FAST_SAMPLES, seed=6)
                self.assertTrue(estimate.within(expected_threshold_utility(0, profile, params), SIGMAS))

    def test_agent_index(self):
        profile = ThresholdProfile.homogeneous(PolicyKind.LOW, 1, 2)
        with self.assertRaises(IndexOutOfRange):
            realized_utility_estimate(profile, row_two(2), 2, 1000)


class DeviationAuditTests(SimpleTestCase):
    def test_same_threshold_has_zero_gain(self):
        profile = ThresholdProfile.homogeneous(PolicyKind.LOW, 4, 3)
        report = deviation_audit(profile, row_two(3), [4], 5000, seed=1)
        for estimate in report.estimates:
            self.assertEqual(estimate.gain.mean, 0.0)
            self.assertEqual(estimate.gain.stderr, 0.0)
        self.assertTrue(report.passed)

    def test_idle_profile_fails(self):
        params = row_two(3)
        profile = ThresholdProfile.homogeneous(PolicyKind.LOW, Bound.NEVER, 3)
        report = deviation_audit(profile, params, [Bound.NEVER, 0, 3, 6], FAST_SAMPLES, seed=2)
        self.assertFalse(report.passed)
        self.assertGreater(report.max_gain, 0.0)
        # alone at tau = 0 the gain is E[exp(-5X)(2/3 - X)] = 1/12
        alone = next(e for e in report.estimates if e.agent == 0 and e.deviation == 0)
        self.assertTrue(alone.gain.within(1 / 12, SIGMAS))
        exact = expected_threshold_utility(0, profile.replace(0, ThresholdPolicy(PolicyKind.LOW, 0)), params)
        self.assertAlmostEqual(exact, 1 / 12, places=7)

    def test_report_serializer(self):
        profile = ThresholdProfile.homogeneous(PolicyKind.LOW, Bound.NEVER, 2)
        report = deviation_audit(profile, row_two(2), [0, 1], 2000, seed=3)
        data = DeviationAuditReportSerializer(report).data
        self.assertEqual(data['n_checked'], 4)
        self.assertEqual(data['epsilon'], 2e-3)
        self.assertIn(data['worst']['deviation'], (0, 1))

    @tag('slow')
    def test_dynamics_fixed_point_passes(self):
        for n_agents in (2, 3, 4):
            params = row_two(n_agents)
            initial = ThresholdProfile.homogeneous(PolicyKind.LOW, 0, n_agents)
            result = best_response_dynamics(initial, params)
            with self.subTest(n_agents=n_agents):
                self.assertTrue(result.converged)
                self.assertTrue(quadrature_deviation_audit(result.profile, params).passed)
                self.assertTrue(deviation_audit(result.profile, params, n_realizations=10 ** 6, seed=4).passed)
