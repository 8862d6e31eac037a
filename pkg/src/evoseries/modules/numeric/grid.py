import json
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from evoseries.modules.utils.util import fraction_str


@dataclass
class GridSolution:
    """
    Field values on a space grid at saved times.

    ``values`` has shape (fields, space points, times); points with
    |space| > ``trust`` may be contaminated by the frozen boundary.
    """
    kind: str
    space_name: str
    fields: tuple
    grid: np.ndarray
    times: np.ndarray
    values: np.ndarray
    trust: float
    scheme: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        expected = (len(self.fields), len(self.grid), len(self.times))
        if self.values.shape != expected:
            raise ValueError("values have shape {}, expected {}".format(self.values.shape, expected))

    @property
    def t_end(self):
        return float(self.times[-1])

    def trust_mask(self):
        return np.abs(self.grid) <= self.trust + 1e-9

    def field_values(self, name):
        return self.values[self.fields.index(name)]

    def time_index(self, t):
        matches = np.nonzero(np.isclose(self.times, float(t), rtol=0.0, atol=1e-12))[0]
        if matches.size == 0:
            raise ValueError("t = {} is not a saved time".format(t))
        return int(matches[0])

    def at(self, name, point, t):
        """Value of ``name`` at a saved time, linearly interpolated in space."""
        column = self.field_values(name)[:, self.time_index(t)]
        return float(np.interp(float(point), self.grid, column))

    def to_frame(self):
        frames = []
        for i, name in enumerate(self.fields):
            tt, xx = np.meshgrid(self.times, self.grid)
            frames.append(pd.DataFrame({'t': tt.reshape(-1),
                                        'space': xx.reshape(-1),
                                        'field': name,
                                        'value': self.values[i].reshape(-1)}))
        frame = pd.concat(frames, ignore_index=True)
        return frame.sort_values(['t', 'field', 'space'], kind='mergesort').reset_index(drop=True)

    def to_csv(self, path):
        self.to_frame().to_csv(path, index=False, float_format='%.15g')

    def metadata(self):
        return {'kind': self.kind,
                'space': self.space_name,
                'fields': list(self.fields),
                'trust': self.trust,
                'scheme': dict(self.scheme),
                'params': {k: fraction_str(v) for k, v in sorted(self.params.items())}}

    def to_json(self):
        out = self.metadata()
        out['grid'] = [float(x) for x in self.grid]
        out['times'] = [float(t) for t in self.times]
        out['values'] = {name: self.values[i].tolist() for i, name in enumerate(self.fields)}
        return json.dumps(out, sort_keys=True)
