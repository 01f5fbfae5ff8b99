"""
Per-sample residuals of a run and their reduction to the JSON report.
"""
import json
import math
from collections import OrderedDict
from typing import Dict, List, Mapping, Optional, Sequence

import pandas as pd

from owd.utility.utility import Utility

COLUMNS = ['check', 'sample', 'residual']


class ResidualReport(object):
    def __init__(self, model: str, params: Mapping[str, object], seed: int, samples: int,
                 tolerances: Mapping[str, float], checks: Sequence[str]):
        """
        Args:
            model: family name
            params: parsed family parameters
            seed: sampling seed
            samples: number of sample points
            tolerances: tolerance of every selected check
            checks: the selected checks, in report order
        """
        self.model = model
        self.params = dict(params)
        self.seed = seed
        self.samples = samples
        self.tolerances = dict(tolerances)
        self.checks = list(checks)
        self.rows = []
        self.wall_ms = 0

    def add(self, check: str, sample: int, residual: float):
        self.rows.append({'check': check, 'sample': sample, 'residual': float(residual)})

    def extend(self, sample: int, residuals: Mapping[str, float]):
        for check, residual in residuals.items():
            self.add(check, sample, residual)

    def table(self) -> pd.DataFrame:
        df = pd.DataFrame(self.rows, columns=COLUMNS)
        return df.sort_values(['sample'], kind='stable').reset_index(drop=True)

    def maxima(self) -> Dict[str, float]:
        """max residual per check; a NaN residual in any sample makes the maximum NaN"""
        df = self.table()
        out = {c: math.nan for c in self.checks}
        for check, group in df.groupby('check', sort=False):
            values = group['residual']
            out[check] = math.nan if values.isna().any() else float(values.max())
        return out

    def summary(self) -> List[OrderedDict]:
        maxima = self.maxima()
        out = []
        for check in self.checks:
            residual = maxima[check]
            passed = (not math.isnan(residual)) and residual <= self.tolerances[check]
            out.append(OrderedDict([('name', check),
                                    ('max_residual', None if math.isnan(residual) else residual),
                                    ('tolerance', self.tolerances[check]),
                                    ('pass', passed)]))
        return out

    def failed(self) -> List[str]:
        return [c['name'] for c in self.summary() if not c['pass']]

    def passed(self) -> bool:
        return not self.failed()

    def document(self) -> OrderedDict:
        return OrderedDict([('model', self.model),
                            ('params', Utility.jsonable(self.params)),
                            ('seed', self.seed),
                            ('samples', self.samples),
                            ('checks', self.summary()),
                            ('wall_ms', int(self.wall_ms))])

    def to_json(self) -> str:
        return json.dumps(self.document(), indent=2)

    def write(self, out: Optional[str] = None, table: Optional[str] = None, stream=None):
        text = self.to_json() + '\n'
        if out:
            with open(out, 'w') as f:
                f.write(text)
        elif stream is not None:
            stream.write(text)
        if table:
            self.table().to_csv(table, index=False)
