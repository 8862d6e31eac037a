from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from evoseries.modules.series.taylor import series_values
from evoseries.modules.utils.errors import ValidationError
from evoseries.modules.utils.util import log


@dataclass
class ValidityWindow:
    t_star: float
    per_field: dict
    curve: pd.DataFrame
    tol: float
    order: int = None
    scheme: dict = field(default_factory=dict)

    def to_dict(self):
        return {'t_star': "{:.15g}".format(self.t_star),
                'per_field': {f: "{:.15g}".format(t) for f, t in sorted(self.per_field.items())},
                'tol': "{:.15g}".format(self.tol),
                'order': self.order,
                'scheme': dict(self.scheme),
                'curve': [{k: "{:.15g}".format(v) for k, v in row.items()}
                          for row in self.curve.to_dict(orient='records')]}

    def to_text(self):
        lines = ["validity window (order {}, tol {:.3g}): t* = {:.6g}".format(self.order, self.tol, self.t_star)]
        for f, t in sorted(self.per_field.items()):
            lines.append("  t*({}) = {:.6g}".format(f, t))
        with pd.option_context('display.float_format', '{:.6e}'.format, 'display.width', 160):
            lines.extend("  " + line for line in self.curve.to_string(index=False).splitlines())
        return "\n".join(lines)


def _first_crossing(times, errors, tol):
    """Last time before the first error above ``tol``; NaN counts as above."""
    bad = np.nonzero(~(errors <= tol))[0]
    if bad.size == 0:
        return float(times[-1])
    if bad[0] == 0:
        return 0.0
    return float(times[bad[0] - 1])


def validity_window(series, ref, tol):
    """
    The largest saved time up to which the series stays within ``tol`` of ``ref``.

    Parameters
    ----------
    series : dict
        Field -> TimeSeries, with the parameters of ``ref``.
    ref : GridSolution
    tol : float
        May be ``inf``.

    Returns
    -------
    ValidityWindow : t* overall and per field, plus the max error over the
        trust region at each saved time.
    """
    mask = ref.trust_mask()
    if not np.any(mask):
        raise ValidationError("the reference solution has an empty trust region")
    tol = float(tol)
    points = ref.grid[mask]
    curve = {'t': ref.times}
    per_field = dict()
    worst = np.zeros(ref.times.shape)
    for f in ref.fields:
        approx = series_values(series[f], points, ref.params, ref.times)
        with np.errstate(invalid='ignore'):
            errors = np.max(np.abs(approx - ref.field_values(f)[mask]), axis=0)
        curve['error_' + f] = errors
        per_field[f] = _first_crossing(ref.times, errors, tol)
        worst = np.maximum(worst, errors)
    curve['error_max'] = worst
    t_star = _first_crossing(ref.times, worst, tol)
    order = min(ts.order for ts in series.values())
    log("validity window: order={}, tol={:.3g}, t* = {:.6g}".format(order, tol, t_star))
    return ValidityWindow(t_star=t_star, per_field=per_field, curve=pd.DataFrame(curve), tol=tol, order=order,
                          scheme=dict(ref.scheme))
