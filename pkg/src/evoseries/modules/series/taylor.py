"""
Taylor-in-time recursion about t = 0.

For dt(u_i) = RHS_i(u, dx u, dxx u, shift(u, s)) the coefficients follow
c_{i,j+1} = [t^j] RHS_i(truncated series) / (j + 1), where dx/dxx act on
each coefficient as x-derivatives and shift(f, s) replaces n by n + s.
"""
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np
from scipy.stats import linregress
from tqdm import tqdm

from evoseries.modules.expr.atoms import to_exp_atoms
from evoseries.modules.expr.calculus import apply_fields, differentiate, shift_space
from evoseries.modules.expr.evaluate import compile_array, evaluate, to_mpf
from evoseries.modules.expr.nodes import Const, Cosh, Dx, Dxx, Exp, IntPow, Operator, Product, Sech, Shift, \
    Sinh, Sum, Symbol, Tanh, has_operators
from evoseries.modules.expr.printer import pretty
from evoseries.modules.expr.simplify import simplify
from evoseries.modules.expr.zero import is_zero, prove_zero
from evoseries.modules.load.problem import DDE, PDE, TIME
from evoseries.modules.series.truncated import TruncatedSeries
from evoseries.modules.utils.errors import EvoSeriesError, OrderOverflow, UnresolvedOperator, ValidationError
from evoseries.modules.utils.util import default_precision, log, run_tasks, to_fraction

DEFAULT_ORDER = 3
NODE_BUDGET = 200000
DEFAULT_T_SAMPLES = (Fraction(1, 10), Fraction(1, 100), Fraction(1, 1000), Fraction(1, 10000))


@dataclass
class TimeSeries:
    """Coefficients c_0..c_N of one field's expansion in t."""
    field: str
    order: int
    coefficients: tuple
    kind: str
    space: str

    def __post_init__(self):
        if len(self.coefficients) != self.order + 1:
            raise ValueError("order {} needs {} coefficients, got {}".format(
                self.order, self.order + 1, len(self.coefficients)))

    def truncate(self, order):
        return TimeSeries(self.field, order, self.coefficients[:order + 1], self.kind, self.space)

    def to_expr(self):
        return TruncatedSeries(self.coefficients).to_expr(TIME)

    def to_dict(self):
        return {'field': self.field,
                'order': self.order,
                'kind': self.kind,
                'space': self.space,
                'coefficients': [pretty(c) for c in self.coefficients]}


def series_rhs(e, fields, space, length, budget=None):
    """
    Evaluate a right-hand side over truncated series.

    Parameters
    ----------
    e : Expr
        Right-hand side with field symbols and dx/dxx/shift nodes.
    fields : dict
        Field name -> TruncatedSeries.
    space : str
    length : int
        Number of t-coefficients to carry.
    """
    memo = dict()

    def walk(node):
        if node in memo:
            return memo[node]
        if not any(f in node.free_symbols for f in fields):
            constant = apply_fields(node, {}, space) if has_operators(node) else node
            out = TruncatedSeries.constant(constant, length, budget)
        elif isinstance(node, Symbol):
            out = fields[node.name]
        elif isinstance(node, Sum):
            out = walk(node.terms[0])
            for t in node.terms[1:]:
                out = out + walk(t)
        elif isinstance(node, Product):
            out = walk(node.factors[0])
            for f in node.factors[1:]:
                out = out * walk(f)
        elif isinstance(node, IntPow):
            out = walk(node.base) ** node.exponent
        elif isinstance(node, Dx):
            out = walk(node.arg).map(lambda c: differentiate(c, space))
        elif isinstance(node, Dxx):
            out = walk(node.arg).map(lambda c: differentiate(differentiate(c, space), space))
        elif isinstance(node, Shift):
            offset = node.offset
            out = walk(node.arg).map(lambda c: shift_space(c, space, offset))
        elif isinstance(node, Operator):
            raise UnresolvedOperator("unknown operator {}".format(node.name))
        else:
            inner = walk(node.arg)
            if isinstance(node, Exp):
                out = inner.exp()
            elif isinstance(node, Tanh):
                out = inner.tanh()
            elif isinstance(node, Sech):
                out = inner.sech()
            elif isinstance(node, Cosh):
                out = inner.cosh()
            elif isinstance(node, Sinh):
                out = inner.sinh()
            else:
                raise TypeError("no series rule for {}".format(type(node).__name__))
        memo[node] = out
        return out

    return walk(e)


def to_normal_form(e):
    """The cancelled exp-atom form of ``e`` as an Expr, or ``e`` itself if it cannot be formed."""
    try:
        return to_exp_atoms(e).to_expr()
    except (EvoSeriesError, TypeError):
        return e


def _rhs_coefficients(fields_chunk, spec, known, j, budget):
    series = {f: TruncatedSeries(cs, budget=budget, label=f) for f, cs in known.items()}
    out = []
    for f in fields_chunk:
        rhs = series_rhs(spec.equations[f], series, spec.space, j + 1, budget)
        out.append((f, rhs[j]))
    return out


def _taylor(spec, order, budget, normal, workers, verbose):
    if order < 0:
        raise ValidationError("order must be non-negative, got {}".format(order))
    start = time.time()
    known = {f: [spec.initial[f]] for f in spec.fields}
    for j in tqdm(range(order), desc="orders", disable=not verbose):
        results = run_tasks(_rhs_coefficients, list(spec.fields), workers, spec, known, j, budget)
        for f, coefficient in results:
            c = simplify(Product((Const(Fraction(1, j + 1)), coefficient)))
            if normal:
                c = to_normal_form(c)
            if c.size > budget:
                raise OrderOverflow(f, j + 1, c.size, budget)
            known[f].append(c)
    out = {f: TimeSeries(field=f, order=order, coefficients=tuple(known[f]), kind=spec.kind, space=spec.space)
           for f in spec.fields}
    log("series statistics: order={}, nodes={}".format(
        order, ", ".join("{}:{}".format(f, sum(c.size for c in ts.coefficients)) for f, ts in out.items())))
    log("series time = {:.3f} s".format(time.time() - start))
    return out


def pde_taylor(spec, order=DEFAULT_ORDER, budget=NODE_BUDGET, normal_form=True, workers=1, verbose=False):
    """
    Taylor coefficients c_0..c_N of every field of a PDE system.

    Parameters
    ----------
    spec : ProblemSpec
        A PDE problem.
    order : int
        Truncation order N >= 0.
    budget : int
        Node budget per coefficient; exceeded -> OrderOverflow.
    normal_form : bool
        Replace c_1..c_N by their cancelled exp-atom form.
    workers : int
        Pool size for per-field right-hand sides within one order.

    Returns
    -------
    dict : field -> TimeSeries
    """
    if spec.kind != PDE:
        raise ValidationError("pde_taylor needs a PDE problem, got {}".format(spec.kind))
    return _taylor(spec, order, budget, normal_form, workers, verbose)


def dde_taylor(spec, order=DEFAULT_ORDER, budget=NODE_BUDGET, normal_form=False, workers=1, verbose=False):
    """Lattice counterpart of ``pde_taylor``; shifts act as n -> n + s on each coefficient."""
    if spec.kind != DDE:
        raise ValidationError("dde_taylor needs a DDE problem, got {}".format(spec.kind))
    return _taylor(spec, order, budget, normal_form, workers, verbose)


def taylor(spec, order=DEFAULT_ORDER, budget=NODE_BUDGET, normal_form=None, workers=1, verbose=False):
    if normal_form is None:
        normal_form = spec.kind == PDE
    if spec.kind == PDE:
        return pde_taylor(spec, order, budget, normal_form, workers, verbose)
    return dde_taylor(spec, order, budget, normal_form, workers, verbose)


def series_defect(spec, series):
    """
    ZeroVerdicts of the t^0..t^(N-1) coefficients of dt(series) - RHS(series).

    Returns
    -------
    dict : field -> list of ZeroVerdict
    """
    order = min(ts.order for ts in series.values())
    if order == 0:
        return {f: [] for f in spec.fields}
    truncated = {f: TruncatedSeries(series[f].coefficients[:order]) for f in spec.fields}
    out = dict()
    for f in spec.fields:
        rhs = series_rhs(spec.equations[f], truncated, spec.space, order)
        verdicts = []
        for j in range(order):
            lhs = simplify(Product((Const(j + 1), series[f].coefficients[j + 1])))
            defect = simplify(Sum((lhs, Product((Const(-1), rhs[j])))))
            verdicts.append(is_zero(defect))
        out[f] = verdicts
    return out


def _bindings(ts, point, params):
    bindings = {name: to_fraction(v) if not isinstance(v, mpmath.mpf) else v for name, v in (params or {}).items()}
    bindings[ts.space] = to_fraction(point) if not isinstance(point, mpmath.mpf) else point
    return bindings


def series_eval(ts, point, t, params=None, precision=None):
    """
    Σ_j c_j(point) t^j at ``precision`` digits.

    Raises UnboundSymbol if a parameter is missing, PoleEvaluation at a pole.
    """
    precision = precision or default_precision()
    bindings = _bindings(ts, point, params)
    with mpmath.workdps(precision + 10):
        tt = to_mpf(to_fraction(t)) if not isinstance(t, mpmath.mpf) else t
        total = mpmath.mpf(0)
        power = mpmath.mpf(1)
        for c in ts.coefficients:
            total += evaluate(c, bindings, precision) * power
            power *= tt
        return total


def series_values(ts, points, params, times):
    """
    Double-precision values of the truncated series.

    Returns
    -------
    numpy.ndarray of shape (len(points), len(times))
    """
    points = np.asarray(points, dtype=float)
    times = np.asarray(times, dtype=float)
    bindings = {name: float(to_fraction(v)) for name, v in (params or {}).items()}
    bindings[ts.space] = points
    out = np.zeros((points.size, times.size))
    for j, c in enumerate(ts.coefficients):
        values = np.broadcast_to(compile_array(c)(bindings), points.shape).reshape(-1)
        out += np.outer(values, times ** j)
    return out


@dataclass
class ResidualOrder:
    exact: bool
    slope: float = None
    samples: list = field(default_factory=list)

    def __str__(self):
        return "exact" if self.exact else "{:.3f}".format(self.slope)

    def to_dict(self):
        return {'exact': self.exact,
                'slope': None if self.exact else "{:.6f}".format(self.slope),
                'samples': [{'t': str(t), 'residual': mpmath.nstr(r, 15)} for t, r in self.samples]}


def _candidates(series):
    out = dict()
    for f, s in series.items():
        out[f] = s.to_expr() if isinstance(s, TimeSeries) else simplify(s)
    return out


def default_points(spec):
    if spec.kind == DDE:
        return [-2, -1, 0, 1, 2]
    return [Fraction(-1), Fraction(-1, 2), Fraction(0), Fraction(1, 2), Fraction(1)]


def residual_order(spec, series, t_samples=DEFAULT_T_SAMPLES, points=None, params=None, precision=None):
    """
    Measured order of the residual dt(S) - RHS(S) of a truncated or closed-form solution.

    Parameters
    ----------
    spec : ProblemSpec
    series : dict
        Field -> TimeSeries, or field -> Expr in (space, t, parameters) for a
        closed form treated as a series of infinite order.
    t_samples : sequence
        Decreasing times, 1e-1 .. 1e-4 by default.
    points : sequence, optional
        Space samples; defaults to a few points around 0.
    params : dict, optional
        Parameter values; unspecified parameters are 1.

    Returns
    -------
    ResidualOrder : ``exact`` when the symbolic residual is zero or every
        sample is zero at working precision, else the least-squares slope of
        log|residual| against log t.
    """
    precision = precision or default_precision()
    points = default_points(spec) if points is None else points
    params = dict(params or {})
    for p in spec.parameters:
        params.setdefault(p, Fraction(1))
    candidates = _candidates(series)
    residuals = dict()
    for f in spec.fields:
        lhs = differentiate(candidates[f], TIME)
        rhs = apply_fields(spec.equations[f], candidates, spec.space)
        residuals[f] = simplify(Sum((lhs, Product((Const(-1), rhs)))))
    closed_form = not any(isinstance(s, TimeSeries) for s in series.values())
    if closed_form and all(prove_zero(r) for r in residuals.values()):
        return ResidualOrder(exact=True)
    free = set()
    for r in residuals.values():
        free |= r.free_symbols
    for name in sorted(free - set(params) - {spec.space, TIME}):
        params[name] = Fraction(1)
    samples = []
    floor = mpmath.mpf(10) ** (-(precision - 5))
    for t in t_samples:
        worst = mpmath.mpf(0)
        for x in points:
            bindings = dict(params)
            bindings[spec.space] = to_fraction(x)
            bindings[TIME] = to_fraction(t)
            for r in residuals.values():
                worst = max(worst, abs(evaluate(r, bindings, precision)))
        samples.append((to_fraction(t), worst))
    if all(r <= floor for _, r in samples):
        return ResidualOrder(exact=True, samples=samples)
    xs = [math.log(float(t)) for t, _ in samples]
    ys = [float(mpmath.log(max(r, floor))) for _, r in samples]
    fit = linregress(xs, ys)
    return ResidualOrder(exact=False, slope=float(fit.slope), samples=samples)


def series_summary(series):
    return {f: ts.to_dict() for f, ts in series.items()}
