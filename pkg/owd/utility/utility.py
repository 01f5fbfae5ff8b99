import json
import numbers
from typing import Dict, Iterable, List, Optional

import numpy as np

from owd.exceptions import ParameterError


class Utility(object):
    @staticmethod
    def split_assignments(assignments: Optional[Iterable[str]], option: str = '--param') -> Dict[str, str]:
        """
        splits repeated `key=value` command line options into a dictionary

        Args:
            assignments: the raw option values, e.g. ['ell=2', 'r=1']
            option: option name used in error messages

        Returns: dict key -> raw string value
        """
        out = {}
        for item in assignments or []:
            if '=' not in item:
                raise ParameterError('{} expects key=value, got "{}"'.format(option, item))
            key, value = item.split('=', 1)
            key = key.strip()
            if not key:
                raise ParameterError('{} has an empty key in "{}"'.format(option, item))
            if key in out:
                raise ParameterError('{} given twice for {}'.format(option, key))
            out[key] = value.strip()
        return out

    @staticmethod
    def parse_tolerances(assignments: Optional[Iterable[str]]) -> Dict[str, float]:
        out = {}
        for key, value in Utility.split_assignments(assignments, option='--tol').items():
            try:
                tol = float(value)
            except ValueError:
                raise ParameterError('tolerance for {} is not a number: {}'.format(key, value))
            if not tol > 0:
                raise ParameterError('tolerance for {} must be positive'.format(key))
            out[key] = tol
        return out

    @staticmethod
    def parse_complex(value: str) -> complex:
        text = value.strip().replace(' ', '').replace('i', 'j')
        if text.endswith('j') and (text == 'j' or text[-2] in '+-'):
            text = text[:-1] + '1j'
        try:
            return complex(text)
        except ValueError:
            raise ParameterError('not a complex number: {}'.format(value))

    @staticmethod
    def read_point_file(path: str) -> Dict[str, complex]:
        """
        reads a JSON point file mapping variable names to [re, im] pairs
        """
        try:
            with open(path) as f:
                raw = json.load(f)
        except (OSError, ValueError) as e:
            raise ParameterError('cannot read point file {}: {}'.format(path, e))
        if not isinstance(raw, dict):
            raise ParameterError('point file must hold a JSON object')
        point = {}
        for name, value in raw.items():
            if isinstance(value, numbers.Number):
                point[name] = complex(value)
            elif isinstance(value, list) and len(value) == 2:
                point[name] = complex(float(value[0]), float(value[1]))
            else:
                raise ParameterError('point entry {} must be [re, im]'.format(name))
        return point

    @staticmethod
    def format_complex(value: complex) -> str:
        value = complex(value)
        return '{},{}'.format(format(value.real, '.15g'), format(value.imag, '.15g'))

    @staticmethod
    def format_array(name: str, array: np.ndarray) -> str:
        flat = np.asarray(array).reshape(-1)
        return '{}: {}'.format(name, ' '.join(Utility.format_complex(v) for v in flat))

    @staticmethod
    def jsonable(value):
        """
        converts parameter values (complex numbers, tuples, numpy scalars) into JSON friendly values
        """
        if isinstance(value, (bool, str)) or value is None:
            return value
        if isinstance(value, numbers.Integral):
            return int(value)
        if isinstance(value, numbers.Real):
            return float(value)
        if isinstance(value, numbers.Complex):
            return [float(value.real), float(value.imag)]
        if isinstance(value, (list, tuple)):
            return [Utility.jsonable(v) for v in value]
        if isinstance(value, dict):
            return {k: Utility.jsonable(v) for k, v in value.items()}
        return str(value)

    @staticmethod
    def lattice_distance(z: complex, periods: List[complex]) -> float:
        """
        distance from z to the lattice (or cylinder) generated by `periods`
        """
        if not periods:
            return abs(z)
        if len(periods) == 1:
            p = periods[0]
            k = round((z / p).real)
            return min(abs(z - (k + j) * p) for j in (-1, 0, 1))
        w1, w2 = periods
        t = z.imag / w2.imag if w2.imag else 0.0
        s = (z - t * w2).real / w1.real
        m, n = round(s), round(t)
        return min(abs(z - (m + i) * w1 - (n + j) * w2) for i in (-1, 0, 1) for j in (-1, 0, 1))
