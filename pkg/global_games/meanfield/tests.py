"""
Tests for the meanfield app.
"""
from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase, tag

from common.exceptions import NoSolution, ParameterError, TooFewSamples, WrongSign
from equilibrium.expected import expected_potential
from estimators.models import PolicyKind, ThresholdProfile
from gamma_poisson.models import McEstimate, ModelParams
from .baselines import (
    critical_gain_infinite, critical_gain_surface, tau_certainty_equivalence, tau_omniscient,
)
from .models import MfpfCurve
from .potential import (
    default_tau_max, is_unimodal, mfpf_argmax, mfpf_curve, mfpf_endpoints, mfpf_estimate,
    prelimit_potential,
)
from .serializers import MfpfCurveSerializer, TableComparisonSerializer
from .table import REFERENCE_ROWS, compare_row, reproduce_table, row_params

SIGMAS = 4.0
FAST_SAMPLES = 200_000


def synthetic_curve(means, stderr=0.01):
    values = [McEstimate(float(m), stderr, 1000, 0) for m in means]
    return MfpfCurve(tuple(range(len(means))), tuple(values), None, 1000, 0)


class BaselineTests(SimpleTestCase):
    def test_certainty_equivalence_matches_table(self):
        for row in REFERENCE_ROWS:
            params = row_params(row)
            with self.subTest(row=row):
                self.assertEqual(tau_certainty_equivalence(params), row.tau_ce)
                self.assertEqual(tau_certainty_equivalence(params, closed_form=False), row.tau_ce)

    def test_omniscient_matches_table(self):
        for row in REFERENCE_ROWS:
            with self.subTest(row=row):
                self.assertAlmostEqual(tau_omniscient(row_params(row)), row.tau_omni, places=12)
        self.assertAlmostEqual(tau_omniscient(ModelParams(1, 1.0, 1.0, 2, 9.0)), 3.0)
        self.assertAlmostEqual(tau_omniscient(ModelParams(1, 1.0, 1.0, -1, 4.0)), 0.25)

    def test_certainty_equivalence_other_exponents(self):
        # (y+1)(y+2)/36 <= 2.1 up to y = 7
        self.assertEqual(tau_certainty_equivalence(ModelParams(1, 1.0, 5.0, 2, 2.1)), 7)
        # c_hat(y) = 2/(y+1) > 0.5 up to y = 2
        self.assertEqual(tau_certainty_equivalence(ModelParams(2, 1.0, 1.0, -1, 0.5)), 2)

    def test_certainty_equivalence_without_solution(self):
        params = ModelParams(3, 0.1, 1.0, 1, 1.0)
        with self.assertRaises(NoSolution):
            tau_certainty_equivalence(params)
        with self.assertRaises(NoSolution):
            tau_certainty_equivalence(params, closed_form=False)
        with self.assertRaises(NoSolution):
            tau_certainty_equivalence(ModelParams(2, 1.0, 1.0, -1, 5.0))

    def test_critical_gain_examples(self):
        self.assertAlmostEqual(critical_gain_infinite(row_params(REFERENCE_ROWS[0])), 11 / 36, places=14)
        self.assertAlmostEqual(critical_gain_infinite(row_params(REFERENCE_ROWS[3])), 2.592, places=12)
        self.assertAlmostEqual(
            critical_gain_infinite(row_params(REFERENCE_ROWS[6])), float(Fraction(277830, 14641)), places=11,
        )

    def test_critical_gain_surface(self):
        thetas = [0.1, 0.5, 1.0, 2.0]
        lambdas = [1.0, 2.0, 5.0]
        surface = critical_gain_surface(thetas, lambdas, k=2, p=1)
        self.assertEqual(surface.shape, (3, 4))
        for row, lam in enumerate(lambdas):
            for column, theta in enumerate(thetas):
                expected = critical_gain_infinite(ModelParams(2, theta, lam, 1, 1.0))
                self.assertAlmostEqual(surface[row, column] / expected, 1.0, places=12)

    def test_critical_gain_needs_positive_exponent(self):
        with self.assertRaises(WrongSign):
            critical_gain_infinite(ModelParams(2, 1.0, 1.0, -1, 1.0))
        with self.assertRaises(WrongSign):
            critical_gain_surface([1.0], [1.0], k=2, p=-1)


class EndpointTests(SimpleTestCase):
    def test_closed_form_example(self):
        endpoints = mfpf_endpoints(row_params(REFERENCE_ROWS[0]))
        self.assertAlmostEqual(endpoints.at_zero, 1 / 22 - 1 / 36 + 1 / 2, places=14)
        self.assertAlmostEqual(endpoints.at_infinity, 0.0, places=14)

    def test_estimates_match_closed_forms(self):
        for row in REFERENCE_ROWS:
            params = row_params(row)
            endpoints = mfpf_endpoints(params)
            with self.subTest(row=row):
                self.assertTrue(mfpf_estimate(0, params, FAST_SAMPLES, seed=11).within(endpoints.at_zero, SIGMAS))
                self.assertTrue(
                    mfpf_estimate(10_000, params, FAST_SAMPLES, seed=12).within(endpoints.at_infinity, SIGMAS)
                )

    def test_high_kind_endpoints(self):
        params = ModelParams(3, 1.0, 2.0, -1, 1.0)
        endpoints = mfpf_endpoints(params)
        self.assertAlmostEqual(endpoints.at_infinity, 0.25)
        self.assertTrue(mfpf_estimate(0, params, FAST_SAMPLES, seed=13).within(endpoints.at_zero, SIGMAS))
        self.assertTrue(mfpf_estimate(10_000, params, FAST_SAMPLES, seed=14).within(endpoints.at_infinity, SIGMAS))


class MfpfEstimateTests(SimpleTestCase):
    params = row_params(REFERENCE_ROWS[1])

    def test_too_few_samples(self):
        with self.assertRaises(TooFewSamples):
            mfpf_estimate(3, self.params, n_samples=10)
        with self.assertRaises(TooFewSamples):
            mfpf_argmax(self.params, 10, n_samples=10)

    def test_grid_needs_positive_end(self):
        with self.assertRaises(ParameterError):
            mfpf_argmax(self.params, tau_max=0, n_samples=1000)

    def test_same_seed_same_estimate(self):
        first = mfpf_estimate(4, self.params, FAST_SAMPLES, seed=5)
        second = mfpf_estimate(4, self.params, FAST_SAMPLES, seed=5)
        self.assertEqual(first, second)
        self.assertNotEqual(first.mean, mfpf_estimate(4, self.params, FAST_SAMPLES, seed=6).mean)

    def test_worker_count_does_not_change_curve(self):
        single = mfpf_curve(self.params, 20, FAST_SAMPLES, seed=7, workers=1)
        pooled = mfpf_curve(self.params, 20, FAST_SAMPLES, seed=7, workers=4)
        np.testing.assert_array_equal(single.means, pooled.means)
        np.testing.assert_array_equal(single.stderrs, pooled.stderrs)

    def test_curve_shares_draws_with_point_estimates(self):
        curve = mfpf_curve(self.params, 12, FAST_SAMPLES, seed=8)
        for tau in (0, 5, 12):
            with self.subTest(tau=tau):
                point = mfpf_estimate(tau, self.params, FAST_SAMPLES, seed=8)
                self.assertAlmostEqual(curve.values[tau].mean, point.mean, places=8)

    def test_default_grid(self):
        self.assertEqual(default_tau_max(self.params), 4 * 6 * 2 + 10)
        self.assertEqual(default_tau_max(self.params.with_gain(0.5)), 4 * 6 + 10)

    def test_argmax_close_to_table(self):
        row = REFERENCE_ROWS[1]
        tau_star, curve = mfpf_argmax(row_params(row), row.tau_max, FAST_SAMPLES, seed=3)
        self.assertLessEqual(abs(tau_star - row.tau_star), 1)
        self.assertEqual(len(curve), row.tau_max + 1)
        self.assertEqual(curve.tau_star, tau_star)

    def test_curve_serializer_marks_argmax(self):
        curve = mfpf_curve(self.params, 10, 1000, seed=1)
        data = MfpfCurveSerializer(curve).data
        flagged = [point['tau'] for point in data['points'] if point['is_argmax']]
        self.assertEqual(flagged, [curve.tau_star])
        self.assertEqual(data['params']['lambda'], 5.0)


class PrelimitPotentialTests(SimpleTestCase):
    def test_matches_expected_potential(self):
        params = row_params(REFERENCE_ROWS[1]).with_agents(4)
        for tau in (0, 3, 7):
            with self.subTest(tau=tau):
                profile = ThresholdProfile.homogeneous(PolicyKind.LOW, tau, 4)
                self.assertAlmostEqual(
                    prelimit_potential(tau, params), expected_potential(profile, params) / 4, places=7,
                )

    def test_approaches_mean_field_limit(self):
        params = row_params(REFERENCE_ROWS[1])
        estimate = mfpf_estimate(5, params, FAST_SAMPLES, seed=21)
        prelimit = prelimit_potential(5, params, n_agents=100_000)
        self.assertLess(abs(prelimit - estimate.mean), SIGMAS * estimate.stderr + 1e-4)

    def test_needs_finite_agents(self):
        with self.assertRaises(ParameterError):
            prelimit_potential(3, row_params(REFERENCE_ROWS[0]))

    def test_divergent_cost_moment(self):
        # E[X^-1] is infinite under an exponential prior
        self.assertEqual(prelimit_potential(2, ModelParams(1, 1.0, 5.0, -1, 2.0, 3)), float('inf'))
        self.assertLess(abs(prelimit_potential(2, ModelParams(3, 1.0, 2.0, -1, 1.0, 3))), float('inf'))


class UnimodalityTests(SimpleTestCase):
    def test_single_peak(self):
        self.assertTrue(is_unimodal(synthetic_curve([0.0, 1.0, 2.0, 1.0, 0.0])))

    def test_noise_sized_dip_is_ignored(self):
        self.assertTrue(is_unimodal(synthetic_curve([0.0, 1.0, 0.99, 2.0, 0.0])))

    def test_two_peaks(self):
        self.assertFalse(is_unimodal(synthetic_curve([0.0, 2.0, 0.5, 3.0, 0.0])))
        self.assertFalse(is_unimodal(synthetic_curve([0.0, 3.0, 0.5, 2.0, 0.0])))


@tag('slow')
class TableReproductionTests(SimpleTestCase):
    def test_reproduces_reference_rows(self):
        for comparison in reproduce_table():
            with self.subTest(row=comparison.row):
                self.assertTrue(comparison.passed, comparison)

    def test_curves_are_unimodal(self):
        for row in REFERENCE_ROWS:
            with self.subTest(row=row):
                _, curve = mfpf_argmax(row_params(row), row.tau_max)
                self.assertTrue(is_unimodal(curve))

    def test_argmax_stable_under_more_samples(self):
        for row in REFERENCE_ROWS[::3]:
            with self.subTest(row=row):
                base, _ = mfpf_argmax(row_params(row), row.tau_max, 1_000_000, seed=1)
                doubled, _ = mfpf_argmax(row_params(row), row.tau_max, 2_000_000, seed=2)
                self.assertLessEqual(abs(base - doubled), 1)

    def test_comparison_serializer(self):
        data = TableComparisonSerializer(compare_row(REFERENCE_ROWS[0], n_samples=1000)).data
        self.assertEqual(data['lambda'], 5.0)
        self.assertEqual(data['expected_tau_ce'], 5)
        self.assertEqual(data['tau_ce'], 5)
