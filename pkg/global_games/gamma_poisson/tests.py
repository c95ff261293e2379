"""
Tests for the gamma_poisson app.
"""
import math
from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase, tag
from scipy import integrate

from common.exceptions import DomainError, InvalidShape, NonPositiveRate, ParameterError, ZeroExponent
from .distributions import (
    cross_belief_pmf, gamma_pdf, gamma_sample, marginal_signal_pmf, poisson_cdf,
    poisson_cdf_sweep, poisson_pmf, posterior_of_state, signal_support_bound,
)
from .models import INFINITE_AGENTS, ModelParams
from .params import dump_params, validate_params
from .special import gamma_moment, gamma_ratio, log_gamma

SIGMAS = 4.0


def joint_draws(params, n, seed, n_signals=1):
    rng = np.random.default_rng(seed)
    x = rng.gamma(params.k, 1.0 / params.theta, n)
    y = rng.poisson(params.lam * x[:, None], (n, n_signals))
    return x, y


def total_variation(empirical_counts, pmf_values):
    empirical = empirical_counts / empirical_counts.sum()
    size = max(len(empirical), len(pmf_values))
    empirical = np.pad(empirical, (0, size - len(empirical)))
    pmf_values = np.pad(pmf_values, (0, size - len(pmf_values)))
    tail = max(0.0, 1.0 - pmf_values.sum())
    return 0.5 * (np.abs(empirical - pmf_values).sum() + tail)


class ValidateParamsTests(SimpleTestCase):
    """
    Tests for parameter ingestion.
    """
    def test_table_setting_is_valid(self):
        params = validate_params({'k': 1, 'theta': 1, 'lambda': 5, 'p': 1, 'g': 2, 'n_agents': 'inf'})
        self.assertEqual(params.k, 1)
        self.assertEqual(params.lam, 5.0)
        self.assertTrue(params.is_infinite)

    def test_zero_rate_is_rejected(self):
        with self.assertRaises(NonPositiveRate):
            validate_params({'k': 1, 'theta': 0, 'lambda': 5, 'p': 1, 'g': 1, 'n_agents': 2})

    def test_zero_exponent_is_rejected(self):
        with self.assertRaises(ZeroExponent):
            validate_params({'k': 2, 'theta': 0.5, 'lambda': 2, 'p': 0, 'g': 5, 'n_agents': 10})

    def test_fractional_shape_is_rejected(self):
        with self.assertRaises(InvalidShape):
            validate_params({'k': 1.5, 'theta': 1, 'lambda': 5, 'p': 1, 'g': 1})

    def test_missing_field_is_a_parameter_error(self):
        with self.assertRaises(ParameterError):
            validate_params({'k': 1, 'theta': 1, 'p': 1, 'g': 1})

    def test_dump_uses_inf_sentinel(self):
        data = dump_params(ModelParams(1, 1.0, 5.0, 1, 2.0, INFINITE_AGENTS))
        self.assertEqual(data, {'k': 1, 'theta': 1.0, 'lambda': 5.0, 'p': 1, 'g': 2.0, 'n_agents': 'inf'})
        self.assertEqual(validate_params(data), ModelParams(1, 1.0, 5.0, 1, 2.0))


class SpecialFunctionTests(SimpleTestCase):
    def test_log_gamma_values(self):
        self.assertEqual(log_gamma(1), 0.0)
        self.assertAlmostEqual(log_gamma(5), math.log(24), places=12)
        self.assertAlmostEqual(log_gamma(0.5), math.log(math.sqrt(math.pi)), places=12)

    def test_log_gamma_relative_accuracy(self):
        for z in (1e-3, 0.37, 12.5, 170.2, 1e6):
            self.assertLess(abs(log_gamma(z) - math.lgamma(z)), 1e-12 * max(1.0, abs(math.lgamma(z))))

    def test_log_gamma_domain(self):
        with self.assertRaises(DomainError):
            log_gamma(0)

    def test_gamma_ratio_and_moment(self):
        self.assertAlmostEqual(gamma_ratio(5, 2), 30.0, places=10)
        self.assertAlmostEqual(gamma_moment(1, 3, 0.1), 30.0, places=9)
        with self.assertRaises(DomainError):
            gamma_moment(-1, 1, 1.0)


class GammaTests(SimpleTestCase):
    def test_exponential_special_case(self):
        self.assertAlmostEqual(gamma_pdf(0.7, 1, 1), math.exp(-0.7), places=7)

    def test_support(self):
        self.assertEqual(gamma_pdf(-1, 2, 3), 0.0)

    def test_density_integrates_to_one_and_matches_formula(self):
        total, _ = integrate.quad(lambda x: gamma_pdf(x, 3, 1.5), 0, np.inf)
        self.assertAlmostEqual(total, 1.0, places=8)
        expected = 1.5 ** 3 / math.gamma(3) * 2 ** 2 * math.exp(-3.0)
        self.assertAlmostEqual(gamma_pdf(2, 3, 1.5), expected, places=12)

    def test_domain(self):
        with self.assertRaises(DomainError):
            gamma_pdf(1.0, 0, 1)

    def test_sample_moments(self):
        draws = gamma_sample(1, 1, np.random.default_rng(1), 10 ** 6)
        self.assertAlmostEqual(draws.mean(), 1.0, delta=0.004)
        draws = gamma_sample(3, 0.1, np.random.default_rng(2), 10 ** 6)
        # sd of the sample variance is about 2 * var / sqrt(n) for shape 3
        self.assertAlmostEqual(draws.var(ddof=1), 300.0, delta=SIGMAS * 0.6)

    def test_same_seed_same_sequence(self):
        first = gamma_sample(2.0, 0.5, np.random.default_rng(99), 50)
        second = gamma_sample(2.0, 0.5, np.random.default_rng(99), 50)
        np.testing.assert_array_equal(first, second)


class PoissonTests(SimpleTestCase):
    def test_pmf_values(self):
        self.assertAlmostEqual(poisson_pmf(0, 2), math.exp(-2), places=12)
        self.assertAlmostEqual(poisson_pmf(3, 3), 27 / 6 * math.exp(-3), places=12)

    def test_pmf_normalization(self):
        total = math.fsum(poisson_pmf(y, 10) for y in range(201))
        self.assertAlmostEqual(total, 1.0, delta=1e-12)

    def test_pmf_domain(self):
        with self.assertRaises(DomainError):
            poisson_pmf(1, 0)
        with self.assertRaises(DomainError):
            poisson_pmf(-1, 1)

    def test_cdf_values(self):
        self.assertEqual(poisson_cdf(-1, 5), 0.0)
        self.assertAlmostEqual(poisson_cdf(0, 5), math.exp(-5), places=14)
        direct = math.fsum(
            float(Fraction(5) ** y / math.factorial(y)) for y in range(11)
        ) * math.exp(-5)
        self.assertAlmostEqual(poisson_cdf(10, 5), direct, delta=1e-13)

    def test_cdf_monotone_and_matches_pmf_sums(self):
        for rate in (0.3, 4.0, 55.0):
            running = 0.0
            previous = 0.0
            for tau in range(120):
                running += poisson_pmf(tau, rate)
                value = poisson_cdf(tau, rate)
                self.assertGreaterEqual(value, previous)
                self.assertAlmostEqual(value, running, delta=1e-12)
                self.assertLessEqual(value, 1.0)
                previous = value

    def test_cdf_domain(self):
        with self.assertRaises(DomainError):
            poisson_cdf(2, 0)

    def test_sweep_matches_cdf(self):
        rates = np.array([0.01, 1.0, 7.5, 80.0, 600.0])
        for tau, values in poisson_cdf_sweep(150, rates):
            np.testing.assert_allclose(values, poisson_cdf(tau, rates), rtol=1e-10, atol=1e-14)


class PosteriorTests(SimpleTestCase):
    def setUp(self):
        self.params = ModelParams(1, 1.0, 5.0, 1, 2.0)

    def test_prior_shape_kept_at_zero(self):
        posterior = posterior_of_state(0, self.params)
        self.assertEqual((posterior.shape, posterior.rate), (1, 6.0))

    def test_conjugate_update(self):
        posterior = posterior_of_state(3, self.params)
        self.assertEqual((posterior.shape, posterior.rate), (4, 6.0))
        self.assertAlmostEqual(posterior.mean, 4 / 6)

    @tag('slow')
    def test_forward_sampled_conditional_means(self):
        for params, seed in ((self.params, 11), (ModelParams(2, 0.5, 2.0, 1, 5.0), 12)):
            x, y = joint_draws(params, 10 ** 6, seed)
            for signal in (0, 1, 3, 10):
                selected = x[y[:, 0] == signal]
                stderr = selected.std(ddof=1) / math.sqrt(len(selected))
                expected = posterior_of_state(signal, params).mean
                self.assertAlmostEqual(selected.mean(), expected, delta=SIGMAS * stderr)


class MarginalSignalTests(SimpleTestCase):
    def test_zero_count(self):
        self.assertAlmostEqual(marginal_signal_pmf(0, ModelParams(1, 1.0, 5.0, 1, 1.0)), 1 / 6, places=12)

    def test_exact_rational_value(self):
        theta, lam = Fraction(1, 10), Fraction(5)
        exact = 3 * (theta / (lam + theta)) ** 2 * (lam / (lam + theta)) ** 2
        value = marginal_signal_pmf(2, ModelParams(2, 0.1, 5.0, 1, 1.0))
        self.assertAlmostEqual(value, float(exact), delta=1e-14)

    def test_normalization_over_grid(self):
        for k in (1, 2, 3):
            for theta in (0.1, 0.5, 1.0):
                for lam in (1.0, 2.0, 5.0):
                    params = ModelParams(k, theta, lam, 1, 1.0)
                    y_max = signal_support_bound(params)
                    total = math.fsum(marginal_signal_pmf(np.arange(y_max + 1), params))
                    self.assertAlmostEqual(total, 1.0, delta=1e-10)

    @tag('slow')
    def test_forward_sampling_total_variation(self):
        for params, seed in ((ModelParams(1, 1.0, 5.0, 1, 1.0), 21), (ModelParams(2, 0.5, 2.0, 1, 1.0), 22)):
            _, y = joint_draws(params, 10 ** 6, seed)
            counts = np.bincount(y[:, 0])
            pmf = marginal_signal_pmf(np.arange(len(counts)), params)
            self.assertLess(total_variation(counts, pmf), 0.01)


class CrossBeliefTests(SimpleTestCase):
    def test_zeroth_term(self):
        self.assertAlmostEqual(cross_belief_pmf(0, 0, ModelParams(1, 1.0, 5.0, 1, 1.0)), 6 / 11, places=12)

    def test_normalization(self):
        params = ModelParams(2, 0.5, 2.0, 1, 1.0)
        total = math.fsum(cross_belief_pmf(np.arange(2001), 5, params))
        self.assertAlmostEqual(total, 1.0, delta=1e-10)

    def test_values_are_probabilities(self):
        params = ModelParams(3, 0.1, 1.0, 1, 1.0)
        values = cross_belief_pmf(np.arange(300), 7, params)
        self.assertTrue(np.all((values >= 0) & (values <= 1)))

    def test_mixture_identity(self):
        params = ModelParams(2, 0.5, 2.0, 1, 1.0)
        y_max = signal_support_bound(params)
        signals = np.arange(y_max + 1)
        weights = marginal_signal_pmf(signals, params)
        for ell in (0, 1, 4, 12, 30):
            mixed = math.fsum(weights * np.array([cross_belief_pmf(ell, y, params) for y in signals]))
            self.assertAlmostEqual(mixed, marginal_signal_pmf(ell, params), delta=1e-8)

    @tag('slow')
    def test_conditional_pmf_from_joint_sampling(self):
        params = ModelParams(1, 1.0, 5.0, 1, 1.0)
        _, y = joint_draws(params, 10 ** 6, 31, n_signals=2)
        for signal in (0, 2):
            others = y[y[:, 0] == signal, 1]
            self.assertGreaterEqual(len(others), 10 ** 5)
            counts = np.bincount(others)
            pmf = cross_belief_pmf(np.arange(len(counts)), signal, params)
            self.assertLess(total_variation(counts, pmf), 0.02)
