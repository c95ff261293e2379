"""
Tests for the cli app.
"""
import json
import tempfile
from contextlib import redirect_stderr
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, tag

from common.utils import exit_code_for
from common.exceptions import NoSolution, SuiteFailure, TooFewSamples
from .config import OutputFormat, build_run_config
from .management.commands.threshold import Command as ThresholdCommand

ROW_ONE = {'k': 1, 'theta': 1.0, 'lambda': 5.0, 'p': 1, 'g': 1.0}
ROW_THREE = dict(ROW_ONE, g=3.0)
FAST = {'n_samples': 100_000, 'seed': 11}


def run(command, *args, **options):
    out = StringIO()
    call_command(command, *args, stdout=out, stderr=StringIO(), **options)
    return out.getvalue()


def run_json(command, *args, **options):
    return json.loads(run(command, *args, **options))


def data_rows(csv_text):
    return [line for line in csv_text.splitlines() if not line.startswith('#')]


class RunConfigTests(SimpleTestCase):
    def test_defaults(self):
        config = build_run_config(dict(ROW_ONE))
        self.assertEqual(config.format, OutputFormat.JSON)
        self.assertEqual(config.n_samples, 10 ** 6)
        self.assertTrue(config.params.is_infinite)

    def test_file_with_overrides(self):
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / 'params.yaml'
            path.write_text('k: 2\ntheta: 0.5\nlambda: 2\np: 1\ng: 5\nn_agents: 4\n', encoding='utf-8')
            config = build_run_config({'params': str(path), 'g': 7.5, 'seed': 3})
        self.assertEqual(config.params.g, 7.5)
        self.assertEqual(config.params.n_agents, 4)
        self.assertEqual(config.seed, 3)

    def test_optional_params(self):
        self.assertIsNone(build_run_config({}, needs_params=False).params)

    def test_exit_codes(self):
        self.assertEqual(exit_code_for(TooFewSamples()), 1)
        self.assertEqual(exit_code_for(NoSolution()), 2)
        self.assertEqual(exit_code_for(SuiteFailure()), 3)
        self.assertEqual(exit_code_for(ValueError()), 1)


class ThresholdCommandTests(SimpleTestCase):
    def test_reference_row(self):
        report = run_json('threshold', tau_max=50, **ROW_THREE, **FAST)
        results = report['results']
        self.assertLessEqual(abs(results['tau_star'] - 10), 2)
        self.assertEqual(results['tau_omni'], 3.0)
        self.assertEqual(results['tau_ce'], 17)
        self.assertTrue(results['condition_holds'])
        self.assertEqual(results['condition']['holds'], results['condition_holds'])
        self.assertEqual(results['condition']['critical_gain'], results['critical_gain'])
        self.assertEqual(results['condition']['direction'], 'above')
        self.assertEqual(report['metadata']['seed'], 11)
        self.assertEqual(report['metadata']['n_samples'], 100_000)
        self.assertEqual(report['metadata']['params']['lambda'], 5.0)
        self.assertIn('version', report['metadata'])

    def test_gain_below_critical(self):
        results = run_json('threshold', tau_max=20, **dict(ROW_ONE, g=0.2), **FAST)['results']
        self.assertFalse(results['condition_holds'])
        self.assertIsInstance(results['tau_star'], int)
        self.assertAlmostEqual(results['critical_gain'], 11 / 36)

    def test_csv(self):
        output = run('threshold', tau_max=20, format='csv', **ROW_THREE, **FAST)
        self.assertTrue(output.startswith('# command=threshold'))
        self.assertIn('# seed=11', output)
        rows = data_rows(output)
        self.assertEqual(rows[0], 'tau_star,tau_omni,tau_ce,critical_gain,condition_holds,unimodal')
        self.assertEqual(len(rows), 2)

    def test_invalid_parameters(self):
        with self.assertRaises(CommandError) as caught:
            run('threshold', **dict(ROW_ONE, theta=0.0), **FAST)
        self.assertEqual(caught.exception.returncode, 1)

    def test_missing_parameters(self):
        with self.assertRaises(CommandError) as caught:
            run('threshold', k=1, **FAST)
        self.assertEqual(caught.exception.returncode, 1)

    def test_badly_typed_flag_is_a_validation_error(self):
        with redirect_stderr(StringIO()) as err, self.assertRaises(SystemExit) as caught:
            ThresholdCommand().run_from_argv(['manage.py', 'threshold', '--k', 'abc'])
        self.assertEqual(caught.exception.code, 1)
        self.assertIn('--k', err.getvalue())
        with self.assertRaises(CommandError) as caught:
            run('threshold', '--format', 'xml')
        self.assertEqual(caught.exception.returncode, 1)

    def test_too_few_samples(self):
        with self.assertRaises(CommandError) as caught:
            run('threshold', n_samples=10, **ROW_ONE)
        self.assertEqual(caught.exception.returncode, 1)


class TableCommandTests(SimpleTestCase):
    def test_small_run(self):
        report = run_json('table', n_samples=10_000, seed=1)
        rows = report['results']
        self.assertEqual(len(rows), 9)
        self.assertEqual([row['tau_ce'] for row in rows], [5, 11, 17, 10, 16, 23, 19, 41, 63])
        for row in rows:
            self.assertEqual(row['tau_ce'], row['expected_tau_ce'])
            self.assertEqual(row['tau_omni'], row['expected_tau_omni'])
        self.assertTrue(report['metadata']['wide_tolerance'])
        self.assertEqual(report['metadata']['tau_star_tolerance'], 2)
        self.assertIsNone(report['metadata']['params'])

    @tag('slow')
    def test_reference_table(self):
        report = run_json('table')
        self.assertEqual(report['metadata']['tau_star_tolerance'], 1)
        self.assertTrue(report['metadata']['all_passed'])
        row = report['results'][7]
        self.assertLessEqual(abs(row['tau_star'] - 16), 1)


class PotentialCommandTests(SimpleTestCase):
    def test_curve_csv(self):
        output = run('potential', tau_max=50, format='csv', **ROW_ONE, **FAST)
        rows = data_rows(output)
        self.assertEqual(rows[0], 'tau,value,stderr,is_argmax')
        self.assertEqual(len(rows), 52)
        flagged = [row for row in rows[1:] if row.endswith(',true')]
        self.assertEqual(len(flagged), 1)
        self.assertIn('# endpoints.at_zero=', output)

    def test_rerun_is_byte_identical(self):
        with tempfile.TemporaryDirectory() as directory:
            first, second = Path(directory) / 'a.csv', Path(directory) / 'b.csv'
            run('potential', tau_max=30, format='csv', out=str(first), **ROW_ONE, **FAST)
            run('potential', tau_max=30, format='csv', out=str(second), workers=3, **ROW_ONE, **FAST)
            self.assertEqual(first.read_bytes(), second.read_bytes())

    def test_argmax_matches_threshold(self):
        curve = run_json('potential', tau_max=50, **ROW_THREE, **FAST)['results']
        summary = run_json('threshold', tau_max=50, **ROW_THREE, **FAST)['results']
        flagged = [point['tau'] for point in curve['points'] if point['is_argmax']]
        self.assertEqual(flagged, [summary['tau_star']])
        self.assertEqual(curve['tau_star'], summary['tau_star'])

    def test_prelimit_column(self):
        output = run('potential', tau_max=10, format='csv', prelimit=True, n=4, **ROW_ONE, **FAST)
        self.assertEqual(data_rows(output)[0], 'tau,value,stderr,is_argmax,prelimit')


class DynamicsCommandTests(SimpleTestCase):
    def test_converges_and_passes_audit(self):
        results = run_json('dynamics', n=3, **dict(ROW_ONE, g=2.0), **FAST)['results']
        self.assertTrue(results['converged'])
        self.assertTrue(results['audit']['passed'])
        self.assertTrue(results['condition_holds'])

    def test_never_is_immediate_fixed_point(self):
        results = run_json('dynamics', n=2, init='never', **dict(ROW_ONE, g=0.2), **FAST)['results']
        self.assertTrue(results['converged'])
        self.assertEqual(results['rounds'], 1)
        self.assertEqual(results['profile']['taus'], ['never', 'never'])

    def test_round_limit(self):
        params = dict(ROW_ONE, g=2.0)
        results = run_json('dynamics', n=3, max_rounds=1, **params, **FAST)['results']
        self.assertFalse(results['converged'])
        with self.assertRaises(CommandError) as caught:
            run('dynamics', n=3, max_rounds=1, require_convergence=True, **params, **FAST)
        self.assertEqual(caught.exception.returncode, 2)

    def test_traces(self):
        with tempfile.TemporaryDirectory() as directory:
            trace = Path(directory) / 'trace.jsonl'
            activation = Path(directory) / 'activation.csv'
            results = run_json(
                'dynamics', n=2, init='inf', trace=str(trace), activation_trace=str(activation),
                n_samples=2000, seed=1, **dict(ROW_ONE, g=2.0),
            )['results']
            records = [json.loads(line) for line in trace.read_text(encoding='utf-8').splitlines()]
            self.assertEqual(len(records), results['rounds'] + 1)
            self.assertEqual(records[0]['round'], 0)
            self.assertEqual(records[0]['profile']['taus'], ['inf', 'inf'])
            lines = data_rows(activation.read_text(encoding='utf-8'))
            self.assertEqual(lines[0], 'round,agent_0,agent_1')
            self.assertEqual(lines[1], '0,1,1')

    def test_agent_limits(self):
        with self.assertRaises(CommandError) as caught:
            run('dynamics', n=33, **ROW_ONE, **FAST)
        self.assertEqual(caught.exception.returncode, 1)
        with self.assertRaises(CommandError) as caught:
            run('dynamics', **ROW_ONE, **FAST)
        self.assertEqual(caught.exception.returncode, 1)


class VerifyCommandTests(SimpleTestCase):
    def test_selected_suites_pass(self):
        rows = run_json('verify', suite=['nash', 'normalization'])['results']
        self.assertEqual([row['suite'] for row in rows], ['nash', 'normalization'])
        self.assertTrue(all(row['passed'] for row in rows))

    def test_injected_fault_is_caught(self):
        out = StringIO()
        with self.assertRaises(CommandError) as caught:
            call_command('verify', suite=['monotonicity'], inject_fault='cost-sign', stdout=out)
        self.assertEqual(caught.exception.returncode, 3)
        rows = json.loads(out.getvalue())['results']
        self.assertFalse(rows[0]['passed'])
        self.assertGreater(rows[0]['n_failures'], 0)

    @tag('slow')
    def test_all_suites_pass(self):
        rows = run_json('verify')['results']
        self.assertEqual(len(rows), 5)
        self.assertTrue(all(row['passed'] for row in rows))


class PlotDataCommandTests(SimpleTestCase):
    def test_signals(self):
        rows = run_json('signals', y_max=20, no_argmax=True, **ROW_ONE)['results']
        self.assertEqual(len(rows), 21)
        self.assertAlmostEqual(rows[0]['pmf'], 1 / 6)
        self.assertEqual(rows[5]['markers'], ['tau_ce'])
        self.assertEqual(rows[1]['markers'], ['tau_omni'])

    def test_critical_gain(self):
        output = run('critical_gain', '--thetas', '1', '--lambdas', '5,2', '--k', '1', '--format', 'csv')
        rows = data_rows(output)
        self.assertEqual(rows[0], 'theta,lambda,critical_gain')
        self.assertEqual(len(rows), 3)
        self.assertTrue(rows[1].startswith('1,5,0.305555555556'))
