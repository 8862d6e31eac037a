"""
Checks of claimed closed-form solutions against a problem.

A claim is Satisfied only when every residual dt(claim) - RHS(claim) and every
initial-condition deviation claim|t=0 - IC canonicalizes to zero; a single
sampled value above the threshold makes it Violated.
"""
import time
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np
import pandas as pd
from tqdm import tqdm

from evoseries.modules.expr.calculus import apply_fields, differentiate, substitute
from evoseries.modules.expr.evaluate import evaluate
from evoseries.modules.expr.nodes import MINUS_ONE, Product, Sum, ZERO
from evoseries.modules.expr.printer import pretty
from evoseries.modules.expr.simplify import simplify
from evoseries.modules.expr.zero import sample_verdict
from evoseries.modules.finding.plan import build_plan
from evoseries.modules.finding.report import ClaimReport, FieldCheck, bindings_dict, number_str
from evoseries.modules.load.problem import DDE, PDE, TIME
from evoseries.modules.series.taylor import taylor
from evoseries.modules.utils.errors import PoleEvaluation, ValidationError
from evoseries.modules.utils.util import NONZERO_THRESHOLD, fraction_str, log, run_tasks, to_fraction

FIRST_TERM_COUNT = 20
FIRST_TERM_STEP = mpmath.mpf('1e-10')
FIRST_TERM_PRECISION = 40
FIRST_TERM_TOLERANCE = 1e-6


def _difference(a, b):
    return simplify(Sum((a, Product((MINUS_ONE, b)))))


def claim_residuals(spec, claim):
    """field -> dt(claim) - RHS(claim), canonical."""
    out = dict()
    for f in spec.fields:
        lhs = differentiate(claim.solutions[f], TIME)
        rhs = apply_fields(spec.equations[f], claim.solutions, spec.space)
        out[f] = _difference(lhs, rhs)
    return out


def initial_deviations(spec, claim):
    """field -> claim|t=0 - IC, canonical."""
    return {f: _difference(substitute(claim.solutions[f], TIME, ZERO), spec.initial[f]) for f in spec.fields}


def _field_checks(chunk, expressions, samples, precision):
    out = []
    for f in chunk:
        e = expressions[f]
        verdict, worst, values = sample_verdict(e, samples, precision)
        poles = [b for b, v in values if v is None]
        out.append(FieldCheck(field=f, verdict=verdict, expression=pretty(e), worst=worst,
                              samples=len(values), poles=poles))
    return out


def check_initial_condition(spec, claim, plan=None, workers=1):
    """
    Initial-condition verdicts of a claim, one FieldCheck per field.

    The deviation claim|t=0 - IC is sampled over space x parameter sets; the
    reported max deviation is the largest sampled magnitude.
    """
    plan = plan or build_plan(spec, claim)
    deviations = initial_deviations(spec, claim)
    return run_tasks(_field_checks, list(spec.fields), workers, deviations,
                     plan.bindings(with_time=False), plan.precision)


def check_claim(spec, claim, plan=None, workers=1):
    """
    Verify a claimed solution of a PDE or DDE problem.

    Parameters
    ----------
    spec : ProblemSpec
    claim : Claim or str
        The claim, or its name in ``spec.claims``.
    plan : SamplePlan, optional
        Defaults to ``build_plan(spec, claim)``.
    workers : int
        Pool size; fields are checked in parallel.

    Returns
    -------
    ClaimReport
    """
    if isinstance(claim, str):
        claim = spec.claim(claim)
    missing = [f for f in spec.fields if f not in claim.solutions]
    if missing:
        raise ValidationError("claim {} is missing field {}".format(claim.name, missing[0]))
    plan = plan or build_plan(spec, claim)
    start = time.time()
    residuals = claim_residuals(spec, claim)
    equations = run_tasks(_field_checks, list(spec.fields), workers, residuals, plan.bindings(), plan.precision)
    ic = check_initial_condition(spec, claim, plan, workers)
    report = ClaimReport(claim=claim.name, problem=spec.name, kind=spec.kind, equations=equations, ic=ic,
                         plan=plan, source_hash=spec.source_hash)
    log("claim {}: status = {}, time = {:.3f} s".format(claim.name, report.status, time.time() - start))
    return report


def check_pde_claim(spec, claim, plan=None, workers=1):
    if spec.kind != PDE:
        raise ValidationError("check_pde_claim needs a PDE problem, got {}".format(spec.kind))
    return check_claim(spec, claim, plan, workers)


def check_dde_claim(spec, claim, plan=None, workers=1):
    """As ``check_pde_claim``; shifts are realized by n -> n + s."""
    if spec.kind != DDE:
        raise ValidationError("check_dde_claim needs a DDE problem, got {}".format(spec.kind))
    return check_claim(spec, claim, plan, workers)


def _max_abs(e, samples, precision):
    """Largest |e| over samples and the signed value at the first sample, poles skipped."""
    worst = None
    signed = None
    for i, b in enumerate(samples):
        try:
            value = evaluate(e, b, precision)
        except PoleEvaluation:
            continue
        if i == 0:
            signed = value
        if worst is None or abs(value) > worst:
            worst = abs(value)
    return worst, signed


def _to_float(value):
    return np.nan if value is None else float(value)


@dataclass
class ScanResult:
    symbol: str
    frame: pd.DataFrame
    brackets: dict = field(default_factory=dict)
    zeros: dict = field(default_factory=dict)
    minima: dict = field(default_factory=dict)

    def to_dict(self):
        rows = []
        for _, row in self.frame.iterrows():
            rows.append({k: (fraction_str(v) if k == self.symbol else number_str(None if pd.isna(v) else float(v)))
                         for k, v in row.items()})
        return {'symbol': self.symbol,
                'rows': rows,
                'sign_changes': {k: [[fraction_str(a), fraction_str(b)] for a, b in v]
                                 for k, v in sorted(self.brackets.items())},
                'near_zero': {k: [fraction_str(g) for g in v] for k, v in sorted(self.zeros.items())},
                'minimum': {k: fraction_str(v) for k, v in sorted(self.minima.items())}}

    def to_text(self):
        lines = ["  parameter scan over {}:".format(self.symbol)]
        frame = self.frame.copy()
        frame[self.symbol] = [fraction_str(v) for v in frame[self.symbol]]
        with pd.option_context('display.float_format', '{:.6e}'.format, 'display.width', 160):
            lines.extend("    " + line for line in frame.to_string(index=False).splitlines())
        for column, values in sorted(self.zeros.items()):
            lines.append("    {} below threshold at {} = {}".format(
                column, self.symbol, ", ".join(fraction_str(v) for v in values)))
        for column, pairs in sorted(self.brackets.items()):
            lines.append("    {} changes sign in {}".format(
                column, ", ".join("[{}, {}]".format(fraction_str(a), fraction_str(b)) for a, b in pairs)))
        return "\n".join(lines)


def scan_grid(lo, hi, count):
    """``count`` equally spaced rationals from lo to hi inclusive."""
    lo, hi = to_fraction(lo), to_fraction(hi)
    count = int(count)
    if count < 1:
        raise ValidationError("scan needs at least one grid value")
    if count == 1:
        return [lo]
    return [lo + (hi - lo) * Fraction(i, count - 1) for i in range(count)]


def parameter_scan(spec, claim, symbol, grid, plan=None, threshold=NONZERO_THRESHOLD, verbose=False):
    """
    Max |IC deviation| per field and max |residual| as one parameter varies.

    Parameters
    ----------
    spec : ProblemSpec
    claim : Claim or str
    symbol : str
        A declared parameter of the problem or claim.
    grid : sequence of rationals
    plan : SamplePlan, optional
        Other parameters stay at the plan's base values; the plan's space and
        time samples are used.

    Returns
    -------
    ScanResult : the table (one row per grid value, poles as NaN), the grid
        brackets in which the signed value at the first sample changes sign,
        the grid values where a column falls below ``threshold`` and the grid
        value of each column's minimum.
    """
    if isinstance(claim, str):
        claim = spec.claim(claim)
    if symbol not in spec.claim_parameters(claim):
        raise ValidationError("cannot scan {}: not a parameter of claim {}".format(symbol, claim.name))
    grid = [to_fraction(g) for g in grid]
    if not grid:
        raise ValidationError("scan grid is empty")
    plan = plan or build_plan(spec, claim)
    deviations = initial_deviations(spec, claim)
    residuals = claim_residuals(spec, claim)
    start = time.time()
    rows, signed = [], []
    for g in tqdm(grid, desc="scan " + symbol, disable=not verbose):
        sub = plan.with_base(symbol, g)
        row = {symbol: g}
        signs = {}
        for f in spec.fields:
            worst, ref = _max_abs(deviations[f], sub.bindings(with_time=False), plan.precision)
            row['ic_max_' + f] = _to_float(worst)
            signs['ic_' + f] = ref
        worst_residual = None
        for f in spec.fields:
            worst, ref = _max_abs(residuals[f], sub.bindings(), plan.precision)
            if worst is not None and (worst_residual is None or worst > worst_residual):
                worst_residual = worst
            signs['residual_' + f] = ref
        row['residual_max'] = _to_float(worst_residual)
        rows.append(row)
        signed.append(signs)
    frame = pd.DataFrame(rows)
    brackets = dict()
    for column in signed[0]:
        pairs = []
        for i in range(len(grid) - 1):
            a, b = signed[i][column], signed[i + 1][column]
            if a is not None and b is not None and a * b < 0:
                pairs.append((grid[i], grid[i + 1]))
        if pairs:
            brackets[column] = pairs
    zeros, minima = dict(), dict()
    for column in frame.columns:
        if column == symbol:
            continue
        values = frame[column].to_numpy(dtype=float)
        below = [grid[i] for i, v in enumerate(values) if not np.isnan(v) and v <= threshold]
        if below:
            zeros[column] = below
        if not np.all(np.isnan(values)):
            minima[column] = grid[int(np.nanargmin(values))]
    log("scan {} over {} values: time = {:.3f} s".format(symbol, len(grid), time.time() - start))
    return ScanResult(symbol=symbol, frame=frame, brackets=brackets, zeros=zeros, minima=minima)


@dataclass
class FirstTermTable:
    frame: pd.DataFrame
    threshold: float = NONZERO_THRESHOLD
    tolerance: float = FIRST_TERM_TOLERANCE

    @property
    def passing(self):
        return self.frame[self.frame['residual_passes'].astype(bool)]

    def summary(self):
        passing = self.passing
        return {'rows': int(len(self.frame)),
                'residual_passing': int(len(passing)),
                'agreeing': int(passing['agrees'].sum()) if len(passing) else 0,
                'trivial_passing': int(passing['trivial'].sum()) if len(passing) else 0,
                'agreeing_all_rows': int(self.frame['agrees'].sum())}

    def to_dict(self):
        rows = []
        for _, row in self.frame.iterrows():
            rows.append({'field': row['field'],
                         'bindings': row['bindings'],
                         'coefficient': row['coefficient'],
                         'derivative': row['derivative'],
                         'difference': row['difference'],
                         'residual': row['residual'],
                         'residual_passes': bool(row['residual_passes']),
                         'agrees': bool(row['agrees']),
                         'trivial': bool(row['trivial'])})
        return {'rows': rows, 'summary': self.summary(), 'tolerance': number_str(self.tolerance)}

    def to_text(self):
        s = self.summary()
        lines = ["  first Taylor term vs d/dt of the claim at t=0: {} rows, {} with residual below threshold, "
                 "{} of those agree within {}".format(s['rows'], s['residual_passing'], s['agreeing'],
                                                      number_str(self.tolerance))]
        if s['residual_passing'] == 0:
            lines.append("  no sample has a residual below threshold at t=0")
        elif s['trivial_passing']:
            lines.append("  {} of the passing rows hold trivially: coefficient and derivative are both 0".format(
                s['trivial_passing']))
        return "\n".join(lines)


def _spread(items, count):
    if count >= len(items):
        return list(items)
    return [items[(i * len(items)) // count] for i in range(count)]


def first_term_agreement(spec, claim, plan=None, count=FIRST_TERM_COUNT, series=None):
    """
    Order-1 Taylor coefficient against the central-difference time derivative
    of the claim at t = 0.

    Rows are flagged with the claim's residual at t = 0; agreement is only
    expected on rows whose residual passes the threshold. A row is trivial
    when both sides vanish there.

    Returns
    -------
    FirstTermTable
    """
    if isinstance(claim, str):
        claim = spec.claim(claim)
    plan = plan or build_plan(spec, claim)
    if series is None:
        series = taylor(spec, order=1, normal_form=False)
    residuals = claim_residuals(spec, claim)
    samples = _spread(plan.bindings(with_time=False), count)
    rows = []
    with mpmath.workdps(FIRST_TERM_PRECISION + 10):
        h = FIRST_TERM_STEP
        for b in samples:
            at_zero = dict(b)
            at_zero[TIME] = Fraction(0)
            residual = None
            try:
                residual = max(abs(evaluate(r, at_zero, FIRST_TERM_PRECISION)) for r in residuals.values())
            except PoleEvaluation:
                pass
            for f in spec.fields:
                try:
                    coefficient = evaluate(series[f].coefficients[1], b, FIRST_TERM_PRECISION)
                    forward = evaluate(claim.solutions[f], {**b, TIME: h}, FIRST_TERM_PRECISION)
                    backward = evaluate(claim.solutions[f], {**b, TIME: -h}, FIRST_TERM_PRECISION)
                except PoleEvaluation:
                    continue
                derivative = (forward - backward) / (2 * h)
                difference = abs(coefficient - derivative)
                trivial = abs(coefficient) <= NONZERO_THRESHOLD and abs(derivative) <= NONZERO_THRESHOLD
                rows.append({'field': f,
                             'bindings': bindings_dict(b),
                             'coefficient': number_str(coefficient),
                             'derivative': number_str(derivative),
                             'difference': number_str(difference),
                             'residual': number_str(residual),
                             'residual_passes': residual is not None and residual <= NONZERO_THRESHOLD,
                             'agrees': difference <= FIRST_TERM_TOLERANCE,
                             'trivial': trivial})
    columns = ['field', 'bindings', 'coefficient', 'derivative', 'difference', 'residual', 'residual_passes',
               'agrees', 'trivial']
    table = FirstTermTable(frame=pd.DataFrame(rows, columns=columns))
    log("first term agreement: {}".format(table.summary()))
    return table
