import io
import json
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

import numpy as np
import pandas as pd

from owd.cli_entry import cli_entry

parent_path = Path(__file__).parent


def _run(*args):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = cli_entry('owd', *args)
    return code, out.getvalue(), err.getvalue()


class TestCommandLine(unittest.TestCase):
    def test_list_models(self):
        code, out, _ = _run('list-models')
        self.assertEqual(code, 0)
        lines = out.strip().split('\n')
        self.assertEqual(lines[0], 'saito-a{ell:int}')
        self.assertIn('jacobi-a{ell:int,tau:complex}', lines)

    def test_verify_report(self):
        code, out, _ = _run('verify', '--model', 'saito-a', '--param', 'ell=2', '--samples', '2', '--seed', '5')
        self.assertEqual(code, 0)
        document = json.loads(out)
        self.assertEqual(list(document), ['model', 'params', 'seed', 'samples', 'checks', 'wall_ms'])
        self.assertEqual(document['params'], {'ell': 2})
        self.assertEqual(list(document['checks'][0]), ['name', 'max_residual', 'tolerance', 'pass'])
        self.assertTrue(all(c['pass'] for c in document['checks']))
        self.assertEqual(document['wall_ms'], 0)

    def test_verify_deterministic(self):
        args = ('verify', '-m', 'dz-a', '-p', 'ell=1', '-p', 'r=1', '-n', '2', '-c', 'omega-x,kab-spread')
        self.assertEqual(_run(*args)[1], _run(*args)[1])

    def test_verify_files(self):
        with tempfile.TemporaryDirectory() as tmp:
            report, table = '{}/report.json'.format(tmp), '{}/residuals.csv'.format(tmp)
            code, out, _ = _run('verify', '-m', 'saito-a', '-p', 'ell=1', '-n', '3', '-c', 'omega-x,closed-wdvv',
                                '-o', report, '--table', table)
            self.assertEqual(code, 0)
            self.assertEqual(out, '')
            with open(report) as f:
                self.assertEqual([c['name'] for c in json.load(f)['checks']], ['omega-x', 'closed-wdvv'])
            df = pd.read_csv(table)
            self.assertEqual(list(df.columns), ['check', 'sample', 'residual'])
            self.assertEqual(len(df), 6)

    def test_failed_check(self):
        code, out, err = _run('verify', '-m', 'dz-a', '-p', 'ell=1', '-p', 'r=1', '-n', '2', '-c', 'open-wdvv-2',
                              '--tol', 'open-wdvv-2=1e-300')
        self.assertEqual(code, 1)
        self.assertFalse(json.loads(out)['checks'][0]['pass'])
        self.assertIn('open-wdvv-2', err)

    def test_argument_errors(self):
        self.assertEqual(_run('verify', '-m', 'saito-e', '-p', 'ell=6')[0], 2)
        self.assertEqual(_run('verify', '-m', 'saito-a', '-p', 'ell=2', '-c', 'kab-value')[0], 2)
        self.assertEqual(_run('verify', '-m', 'saito-a', '-p', 'ell=2', '-c', 'omega-x',
                              '--tol', 'kab-value=1')[0], 2)
        self.assertEqual(_run('verify', '-m', 'saito-a', '-p', 'ell', '-n', '1')[0], 2)
        self.assertEqual(_run('verify', '-m', 'saito-a', '-p', 'ell=2', '-n', '0')[0], 2)

    def test_metric(self):
        code, out, _ = _run('metric', '-m', 'dz-a', '-p', 'ell=2', '-p', 'r=1',
                            '--point', '{}/data/dz_a_point.json'.format(parent_path))
        self.assertEqual(code, 0)
        lines = dict(line.split(': ', 1) for line in out.strip().split('\n'))
        self.assertEqual(list(lines), ['eta', 'g', 'c', 'c_dual'])
        values = [complex(*map(float, v.split(','))) for v in lines['g'].split(' ')]
        np.testing.assert_allclose(np.reshape(values, (3, 3)), np.ones((3, 3)) - np.eye(3), atol=1e-9)
        self.assertEqual(len(lines['c'].split(' ')), 27)

    def test_metric_closed_form(self):
        code, out, _ = _run('metric', '-m', 'jacobi-a', '-p', 'ell=1', '-p', 'tau=1j',
                            '--point', '{}/data/jacobi_a_point.json'.format(parent_path))
        self.assertEqual(code, 0)
        lines = dict(line.split(': ', 1) for line in out.strip().split('\n'))
        values = [complex(*map(float, v.split(','))) for v in lines['g'].split(' ')]
        expected = np.pi ** 2 * np.array([[-2, 0, 0], [0, 0, 1], [0, 1, 0]])
        np.testing.assert_allclose(np.reshape(values, (3, 3)), expected, atol=1e-9)

    def test_metric_inadmissible_point(self):
        code, _, err = _run('metric', '-m', 'saito-a', '-p', 'ell=2',
                            '--point', '{}/data/saito_a_degenerate_point.json'.format(parent_path))
        self.assertEqual(code, 1)
        self.assertIn('inadmissible point', err)

    def test_varpi(self):
        code, out, _ = _run('varpi', '--ell', '3')
        self.assertEqual(code, 0)
        self.assertEqual(out.strip(), '1/4 v1*v2')
        self.assertEqual(_run('varpi', '--ell', '0')[0], 2)

    def test_periods(self):
        code, out, _ = _run('periods', '-m', 'dual-saito-a', '-p', 'ell=1', '-n', '1', '-z', '3')
        self.assertEqual(code, 0)
        self.assertEqual([c['name'] for c in json.loads(out)['checks']], ['gauss-manin', 'quadrature-stability'])
