"""
Registry of the model families exposed on the command line, with the parameter schema of each family.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, Mapping, Tuple, Union

from owd.exceptions import ParameterError, UnknownFamilyError
from owd.models import dual, jacobi, rank_two, saito
from owd.models.bundle import ModelBundle, RankTwoBundle
from owd.utility.utility import Utility

Bundle = Union[ModelBundle, RankTwoBundle]


def _int(value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ParameterError('expected an integer, got {}'.format(value))


def _int_list(value: str):
    return tuple(_int(v) for v in value.split(',') if v.strip())


def _text(value: str) -> str:
    return value


PARSERS = {'int': _int, 'ints': _int_list, 'complex': Utility.parse_complex, 'str': _text}


@dataclass(frozen=True)
class Family:
    name: str
    schema: Tuple[Tuple[str, str], ...]
    builder: Callable[..., Bundle]
    defaults: Tuple[Tuple[str, object], ...] = ()
    alternatives: Tuple[Tuple[Tuple[str, str], ...], ...] = ()
    description: str = ''

    def describe(self) -> str:
        schemas = (self.schema,) + self.alternatives
        forms = ' | '.join(','.join('{}:{}'.format(k, t) for k, t in s) for s in schemas)
        return '{}{{{}}}'.format(self.name, forms)

    def parse(self, raw: Mapping[str, str]) -> Dict[str, object]:
        defaults = dict(self.defaults)
        for schema in (self.schema,) + self.alternatives:
            keys = {k for k, _ in schema}
            if set(raw) <= keys and keys - set(raw) <= set(defaults):
                out = {k: defaults[k] for k in keys if k not in raw}
                for key, kind in schema:
                    if key in raw:
                        out[key] = PARSERS[kind](raw[key])
                return out
        expected = ' or '.join(','.join(k for k, _ in s) for s in (self.schema,) + self.alternatives)
        raise ParameterError('{} expects parameters {}, got {}'.format(self.name, expected, ','.join(sorted(raw))))


def _fold(rule: str):
    def build(ell: int) -> ModelBundle:
        source_rank = saito.FOLD_RULES[rule][0](ell)
        if source_rank < 1:
            raise ParameterError('{} is not defined for ell = {}'.format(rule, ell))
        return saito.fold(build_cached('saito-a', (('ell', source_rank),)), rule, ell)
    return build


FAMILIES = (
    Family('saito-a', (('ell', 'int'),), saito.build_saito_a, description='Saito A_ell in flat coordinates'),
    Family('saito-d', (('ell', 'int'),), saito.build_saito_d, description='Saito D_ell in the parameter chart'),
    Family('dual-saito-a', (('ell', 'int'),), dual.build_dual_saito_a,
           description='almost dual of A_ell in the flat coordinates of the intersection form'),
    Family('dz-a', (('ell', 'int'), ('r', 'int')), dual.build_dz_a,
           description='almost dual of the Dubrovin-Zhang extended affine Weyl orbit space'),
    Family('ma-zuo', (('ell', 'int'), ('r', 'int'), ('k', 'int')), dual.build_ma_zuo,
           alternatives=((('n', 'int'), ('r', 'int'), ('ks', 'ints')),),
           description='almost dual of the Ma-Zuo orbit space, or its generalization with poles of orders ks'),
    Family('jacobi-a', (('ell', 'int'), ('tau', 'complex')), jacobi.build_jacobi_a, defaults=(('tau', 1j),),
           description='almost dual of the Jacobi group orbit space of type A'),
    Family('rank2-a', (('ell', 'int'), ('psi', 'str')), rank_two.build_rank2_a, defaults=(('psi', 'linear'),),
           description='rank-two extension of Saito A_ell over C^2'),
    Family('fold-b', (('ell', 'int'),), _fold('fold-b'), description='B_ell folded from A_(2 ell - 1)'),
    Family('fold-i2', (('ell', 'int'),), _fold('fold-i2'), description='I_2(ell) folded from A_(ell - 1)'),
)

REGISTRY = {f.name: f for f in FAMILIES}


def family(name: str) -> Family:
    try:
        return REGISTRY[name]
    except KeyError:
        raise UnknownFamilyError('unknown model family {}; known families: {}'.format(name, ', '.join(REGISTRY)))


def parse_parameters(name: str, raw: Mapping[str, str]) -> Dict[str, object]:
    return family(name).parse(raw)


@lru_cache(maxsize=None)
def build_cached(name: str, params: Tuple[Tuple[str, object], ...]) -> Bundle:
    return family(name).builder(**dict(params))


def build(name: str, params: Mapping[str, object]) -> Bundle:
    """
    builds (and caches) the bundle of a family from parsed parameters; list valued parameters are frozen to tuples
    """
    key = tuple(sorted((k, tuple(v) if isinstance(v, list) else v) for k, v in params.items()))
    return build_cached(name, key)


def listing() -> str:
    return '\n'.join(f.describe() for f in FAMILIES)
