"""
Command line options shared by the subcommands that run checks on a model.
"""
from typing import Mapping

from owd.exceptions import ParameterError
from owd.models import catalog
from owd.utility.utility import Utility


def add_model_arguments(parser):
    parser.add_argument('-m', '--model', action='store', type=str, dest='model', required=True,
                        help='model family, see list-models')

    parser.add_argument('-p', '--param', action='append', type=str, dest='param', default=[],
                        help='family parameter as key=value, repeatable, e.g. --param ell=2 --param tau=0.3+1j')


def add_run_arguments(parser, default_samples: int = 10):
    add_model_arguments(parser)
    parser.add_argument('-n', '--samples', action='store', type=int, dest='samples', default=default_samples,
                        help='number of admissible sample points. Default is {}'.format(default_samples))

    parser.add_argument('-s', '--seed', action='store', type=int, dest='seed', default=0,
                        help='seed of the sampler; equal seeds give identical reports')

    parser.add_argument('-c', '--checks', action='store', type=str, dest='checks',
                        help='comma separated list of checks to run. Default is every check that applies')

    parser.add_argument('--tol', action='append', type=str, dest='tol', default=[],
                        help='tolerance override as check=value, repeatable')

    parser.add_argument('-j', '--jobs', action='store', type=int, dest='jobs', default=1,
                        help='number of worker threads evaluating samples')

    parser.add_argument('-o', '--out', action='store', type=str, dest='out',
                        help='write the JSON report to this file instead of stdout')

    parser.add_argument('--table', action='store', type=str, dest='table',
                        help='also write the per-sample residuals as CSV to this file')

    parser.add_argument('--record-time', action='store_true', dest='record_time',
                        help='store the wall time in the report; reports are otherwise byte-identical across runs')


def model_parameters(kwargs: Mapping[str, object]):
    raw = Utility.split_assignments(kwargs.get('param'))
    return catalog.parse_parameters(kwargs['model'], raw)


def run_config(kwargs: Mapping[str, object], **overrides):
    from owd.verification.runner import RunConfig

    if kwargs['samples'] < 1:
        raise ParameterError('--samples must be positive, got {}'.format(kwargs['samples']))
    if (kwargs.get('jobs') or 1) < 1:
        raise ParameterError('--jobs must be positive, got {}'.format(kwargs['jobs']))
    checks = kwargs.get('checks')
    names = tuple(c.strip() for c in checks.split(',') if c.strip()) if checks else None
    values = dict(family=kwargs['model'], params=model_parameters(kwargs), seed=kwargs['seed'],
                  samples=kwargs['samples'], tolerances=Utility.parse_tolerances(kwargs.get('tol')), checks=names,
                  jobs=kwargs.get('jobs') or 1, record_time=bool(kwargs.get('record_time')), out=kwargs.get('out'),
                  table=kwargs.get('table'))
    values.update(overrides)
    return RunConfig(**values)
