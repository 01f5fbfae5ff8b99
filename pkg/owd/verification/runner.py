"""
Check registry and the driver that evaluates the selected checks over seeded samples of one model.
"""
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Tuple

import numpy as np

from owd.exceptions import (EndpointMismatchError, InadmissiblePointError, NonConvergenceError, NumericDomainError,
                            QuadratureError, UnknownCheckError)
from owd.frobenius.geometry import eta_residue, g_residue
from owd.models import catalog
from owd.models.bundle import ModelBundle, RankTwoBundle
from owd.verification import periods, residuals
from owd.verification.report import ResidualReport
from owd.verification.sampling import Sample, Sampler

_logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-7
LOOSE_TOLERANCE = 1e-6
DEFAULT_EXPONENTS = (2.5, 3.0)

SAMPLE = 'sample'
PERIOD = 'period'

DOMAIN_ERRORS = (NumericDomainError, InadmissiblePointError, NonConvergenceError, QuadratureError,
                 EndpointMismatchError, np.linalg.LinAlgError, ZeroDivisionError)


@dataclass(frozen=True)
class RunConfig:
    family: str
    params: Mapping[str, object]
    seed: int = 0
    samples: int = 10
    tolerances: Mapping[str, float] = field(default_factory=dict)
    checks: Optional[Tuple[str, ...]] = None
    jobs: int = 1
    record_time: bool = False
    out: Optional[str] = None
    table: Optional[str] = None
    exponents: Tuple[float, ...] = DEFAULT_EXPONENTS


@dataclass
class RunContext:
    config: RunConfig
    reference_metric: Optional[np.ndarray] = None


@dataclass(frozen=True)
class Check:
    name: str
    kind: str
    applies: Callable[[object], bool]
    evaluate: Callable[[object, Sample, RunContext, Dict], float]
    description: str = ''


def _memo(memo: Dict, key, compute):
    if key not in memo:
        memo[key] = compute()
    return memo[key]


def _over_xs(bundle, sample: Sample, function) -> List:
    return [function(bundle, sample.point, x) for x in sample.xs]


def _is_model(bundle) -> bool:
    return isinstance(bundle, ModelBundle)


def _is_flat(bundle) -> bool:
    return _is_model(bundle) and bundle.flat


def _is_dual(bundle) -> bool:
    return _is_model(bundle) and bundle.dual


def _is_rank_two(bundle) -> bool:
    return isinstance(bundle, RankTwoBundle)


def _has_fstar(bundle) -> bool:
    return _is_model(bundle) and bundle.dual_prepotential is not None


def _has_closed_form(bundle) -> bool:
    return _is_model(bundle) and bundle.intersection_form is not None


def _open_wdvv_values(bundle, sample, memo):
    """(r1, r2) per fibre point, with the dual product read off F* whenever the bundle carries one"""
    def compute():
        structure = None
        if _has_fstar(bundle):
            structure = residuals.prepotential_structure(bundle, sample.point, sample.frame)
        return [residuals.open_wdvv_residual(bundle, sample.point, x, sample.products, structure)
                for x in sample.xs]
    return _memo(memo, 'open-wdvv', compute)


def _open_wdvv(bundle, sample, memo, index):
    return max(v[index] for v in _open_wdvv_values(bundle, sample, memo))


def _auxiliary_extension(bundle, sample, context, memo):
    return residuals.auxiliary_extension_residual(bundle, sample.point, sample.xs,
                                                  _open_wdvv_values(bundle, sample, memo))


def _kab(bundle, sample, memo, index):
    return _memo(memo, 'kab', lambda: residuals.kab_constancy(bundle, sample.point, sample.xs, sample.products))[index]


def _homogeneity(bundle, sample, memo, index):
    values = _memo(memo, 'homogeneity', lambda: _over_xs(bundle, sample, residuals.homogeneity_residual))
    return max(v[index] for v in values)


def _eventual(bundle, sample, memo, index):
    values = _memo(memo, 'eventual', lambda: [
        residuals.eventual_identity_residuals(bundle, sample.point, x, sample.products) for x in sample.xs])
    return max(v[index] for v in values)


def _closed_wdvv(bundle, sample, context, memo):
    worst = residuals.closed_wdvv_residual(eta_residue(bundle, sample.point, sample.frame))
    if bundle.dual:
        worst = max(worst, residuals.closed_wdvv_residual(g_residue(bundle, sample.point, sample.frame)))
    return worst


def _extended_product(bundle, sample, context, memo):
    rng = sample.rng()
    return max(residuals.extended_product_defect(bundle, sample.point, x, sample.products, rng) for x in sample.xs)


def _metric_constancy(bundle, sample, context, memo):
    return residuals.metric_variation(residuals.flat_metric(bundle, sample.point, sample.frame),
                                      context.reference_metric)


def _rank2(bundle, sample, memo, index):
    values = _memo(memo, 'rank2', lambda: [residuals.rank2_residual(bundle, sample.point, z, w, sample.products)
                                           for z, w in zip(sample.xs, sample.ws)])
    return max(v[index] for v in values)


def _rank2_pointwise(function):
    def evaluate(bundle, sample, context, memo):
        return max(function(bundle, sample.point, z, w) for z, w in zip(sample.xs, sample.ws))
    return evaluate


def _period_checks(bundle, sample, context, memo):
    def compute():
        gm, stability = 0.0, 0.0
        for path in periods.real_zero_paths(bundle, sample.point):
            for zexp in context.config.exponents:
                gm = max(gm, periods.gauss_manin_residual(bundle, path, zexp, sample.point, sample.products))
                stability = max(stability, periods.quadrature_stability(bundle, path, zexp, sample.point))
        return gm, stability
    return _memo(memo, 'periods', compute)


def _is_dual_saito_a(bundle) -> bool:
    return _is_model(bundle) and bundle.family == 'dual-saito-a'


CHECKS = (
    Check('omega-x', SAMPLE, _is_model,
          lambda b, s, c, m: residuals.omega_x_residual(b, s.point, s.xs),
          'Omega_x / a against lambda, or log lambda up to a constant for dual models'),
    Check('open-wdvv-1', SAMPLE, _is_flat, lambda b, s, c, m: _open_wdvv(b, s, m, 0),
          'first open WDVV family'),
    Check('open-wdvv-2', SAMPLE, _is_flat, lambda b, s, c, m: _open_wdvv(b, s, m, 1),
          'second open WDVV family'),
    Check('auxiliary-extension', SAMPLE, _is_flat, _auxiliary_extension,
          'first open WDVV family wherever the second holds and Omega'' does not vanish'),
    Check('closed-wdvv', SAMPLE, _is_model, _closed_wdvv, 'associativity of the residue product(s)'),
    Check('kab-spread', SAMPLE, _is_dual, lambda b, s, c, m: _kab(b, s, m, 0), 'K_ab independent of x'),
    Check('kab-value', SAMPLE, _is_dual, lambda b, s, c, m: _kab(b, s, m, 1), 'K_ab vanishes'),
    Check('homogeneity-lambda', SAMPLE, _is_model, lambda b, s, c, m: _homogeneity(b, s, m, 0),
          'Lie derivative of lambda along the eventual identity'),
    Check('homogeneity-omega', SAMPLE, _is_model, lambda b, s, c, m: _homogeneity(b, s, m, 1),
          'quasi-homogeneity of Omega up to quadratic terms'),
    Check('eventual-identity', SAMPLE, _is_model, lambda b, s, c, m: _eventual(b, s, m, 0),
          'stored eventual identity against its reconstruction'),
    Check('eventual-inverse', SAMPLE, _is_model, lambda b, s, c, m: _eventual(b, s, m, 1),
          'inverse of the eventual identity'),
    Check('extended-product', SAMPLE, _is_model, _extended_product,
          'associativity and units of the extended products'),
    Check('euler-canonical', SAMPLE, _is_model,
          lambda b, s, c, m: residuals.euler_canonical_residual(b, s.point, s.products),
          'Euler field equal to sum u_i d/du_i'),
    Check('canonical-diagonal', SAMPLE, _is_model,
          lambda b, s, c, m: residuals.canonical_diagonal_residual(b, s.point, s.frame),
          'eta diagonal in canonical coordinates'),
    Check('metric-constancy', SAMPLE, _is_flat, _metric_constancy, 'flat metric constant in the chart'),
    Check('fstar-consistency', SAMPLE, _has_fstar,
          lambda b, s, c, m: residuals.fstar_residual(b, s.point, s.frame, s.products),
          'third derivatives of F* against the residue dual product'),
    Check('intersection-form', SAMPLE, _has_closed_form,
          lambda b, s, c, m: residuals.intersection_form_residual(b, s.point, s.frame),
          'residue intersection form against the closed form of the family'),
    Check('rank2-family-1', SAMPLE, _is_rank_two, lambda b, s, c, m: _rank2(b, s, m, 0), 'base-base family'),
    Check('rank2-family-2', SAMPLE, _is_rank_two, lambda b, s, c, m: _rank2(b, s, m, 1), 'base-fibre family'),
    Check('rank2-family-3', SAMPLE, _is_rank_two, lambda b, s, c, m: _rank2(b, s, m, 2), 'mixed family'),
    Check('rank2-family-4', SAMPLE, _is_rank_two, lambda b, s, c, m: _rank2(b, s, m, 3), 'fibre-fibre family'),
    Check('rank2-restriction', SAMPLE, _is_rank_two, _rank2_pointwise(residuals.rank2_restriction_residual),
          'w = 0 slice reproduces the rank-one extension'),
    Check('rank2-table', SAMPLE, lambda b: _is_rank_two(b) and b.params.get('psi') == 'linear',
          _rank2_pointwise(residuals.rank2_table_residual), 'fibre multiplication table'),
    Check('gauss-manin', PERIOD, _is_dual_saito_a, lambda b, s, c, m: _period_checks(b, s, c, m)[0],
          'twisted periods flat for the deformed dual connection'),
    Check('quadrature-stability', PERIOD, _is_dual_saito_a, lambda b, s, c, m: _period_checks(b, s, c, m)[1],
          'periods unchanged when the quadrature nodes are doubled'),
)

REGISTRY = {c.name: c for c in CHECKS}


def applicable(bundle, kind: str = SAMPLE) -> List[Check]:
    return [c for c in CHECKS if c.kind == kind and c.applies(bundle)]


def select(bundle, names: Optional[Tuple[str, ...]], kind: str = SAMPLE) -> List[Check]:
    """
    the checks named by the user in the given order, or every applicable check of the kind

    Raises:
        UnknownCheckError: a name is unknown, does not apply to the bundle or belongs to the other kind
    """
    if not names:
        return applicable(bundle, kind)
    out = []
    for name in names:
        if name not in REGISTRY:
            raise UnknownCheckError('unknown check {}; known checks: {}'.format(name, ', '.join(REGISTRY)))
        check = REGISTRY[name]
        if not check.applies(bundle):
            raise UnknownCheckError('check {} does not apply to {}'.format(name, bundle.label))
        if check.kind != kind:
            other = 'periods' if check.kind == PERIOD else 'verify'
            raise UnknownCheckError('check {} is run by the {} subcommand'.format(name, other))
        out.append(check)
    return out


def tolerances(config: RunConfig, checks: List[Check]) -> Dict[str, float]:
    names = [c.name for c in checks]
    for name in config.tolerances:
        if name not in names:
            raise UnknownCheckError('--tol names {}, which is not among the selected checks'.format(name))
    out = {}
    for check in checks:
        loose = check.kind == PERIOD or config.family.startswith('jacobi')
        out[check.name] = config.tolerances.get(check.name, LOOSE_TOLERANCE if loose else DEFAULT_TOLERANCE)
    return out


def evaluate_sample(bundle, sample: Sample, checks: List[Check], context: RunContext) -> Dict[str, float]:
    memo = {}
    out = {}
    for check in checks:
        try:
            out[check.name] = float(check.evaluate(bundle, sample, context, memo))
        except DOMAIN_ERRORS as e:
            _logger.warning('%s failed on sample %d of %s: %s', check.name, sample.index, bundle.label, e)
            out[check.name] = math.nan
    return out


def run(config: RunConfig, kind: str = SAMPLE) -> ResidualReport:
    """
    builds the model, draws the samples and evaluates the selected checks; checks of the period kind sample real
    parameters so that lambda has real zeros to integrate between
    """
    start = time.time()
    bundle = catalog.build(config.family, config.params)
    checks = select(bundle, config.checks, kind)
    if not checks:
        raise UnknownCheckError('no {} checks apply to {}'.format('period' if kind == PERIOD else 'verify',
                                                                  bundle.label))
    tols = tolerances(config, checks)
    samples = Sampler(bundle, config.seed, real=kind == PERIOD).draw(config.samples)
    context = RunContext(config)
    if any(c.name == 'metric-constancy' for c in checks) and samples:
        first = samples[0]
        context.reference_metric = residuals.flat_metric(bundle, first.point, first.frame)
    report = ResidualReport(config.family, config.params, config.seed, config.samples, tols, [c.name for c in checks])
    with ThreadPoolExecutor(max_workers=max(1, config.jobs)) as pool:
        results = list(pool.map(lambda s: evaluate_sample(bundle, s, checks, context), samples))
    for sample, values in zip(samples, results):
        report.extend(sample.index, values)
    elapsed = (time.time() - start) * 1000
    _logger.info('%s: %d samples, %d checks in %.0f ms', bundle.label, len(samples), len(checks), elapsed)
    if config.record_time:
        report.wall_ms = int(round(elapsed))
    return report
