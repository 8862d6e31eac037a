"""
Numeric evaluation: mpmath at a chosen precision, numpy for grids.
"""
from fractions import Fraction

import mpmath
import numpy as np

from evoseries.modules.expr.nodes import Const, Cosh, Exp, IntPow, Operator, Product, Sech, Sinh, Sum, Symbol, Tanh
from evoseries.modules.utils.errors import PoleEvaluation, UnboundSymbol, UnresolvedOperator, ValidationError
from evoseries.modules.utils.util import MIN_PRECISION, default_precision

GUARD_DIGITS = 10

_MP_FUNCTIONS = {
    Exp: mpmath.exp,
    Tanh: mpmath.tanh,
    Sech: mpmath.sech,
    Cosh: mpmath.cosh,
    Sinh: mpmath.sinh,
}

_NP_FUNCTIONS = {
    Exp: np.exp,
    Tanh: np.tanh,
    Sech: lambda a: 1.0 / np.cosh(a),
    Cosh: np.cosh,
    Sinh: np.sinh,
}


def to_mpf(value):
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    if isinstance(value, str):
        value = Fraction(value)
        return mpmath.mpf(value.numerator) / value.denominator
    return mpmath.mpf(value)


def check_precision(precision):
    if precision is None:
        return default_precision()
    precision = int(precision)
    if precision < MIN_PRECISION:
        raise ValidationError("precision must be at least {} digits, got {}".format(MIN_PRECISION, precision))
    return precision


def evaluate(e, bindings, precision=None):
    """
    Evaluate ``e`` at ``bindings`` with ``precision`` significant decimal digits.

    Parameters
    ----------
    e : Expr
    bindings : dict
        Symbol name -> number (int, Fraction, decimal string, float or mpf).
    precision : int, optional
        Decimal digits, at least 15; defaults to EVOSERIES_PRECISION or 30.

    Returns
    -------
    mpmath.mpf

    Raises
    ------
    UnboundSymbol
        A free symbol of ``e`` has no binding.
    PoleEvaluation
        A negative power of an exact zero was met.
    """
    precision = check_precision(precision)
    with mpmath.workdps(precision + GUARD_DIGITS):
        values = {name: to_mpf(v) for name, v in bindings.items()}
        memo = dict()
        return _mp_eval(e, values, memo)


def _mp_eval(e, values, memo):
    if e in memo:
        return memo[e]
    if isinstance(e, Const):
        out = to_mpf(e.value)
    elif isinstance(e, Symbol):
        if e.name not in values:
            raise UnboundSymbol(e.name)
        out = values[e.name]
    elif isinstance(e, Sum):
        out = mpmath.fsum(_mp_eval(t, values, memo) for t in e.terms)
    elif isinstance(e, Product):
        out = mpmath.mpf(1)
        for f in e.factors:
            out *= _mp_eval(f, values, memo)
    elif isinstance(e, IntPow):
        base = _mp_eval(e.base, values, memo)
        if base == 0 and e.exponent < 0:
            raise PoleEvaluation("denominator {} is zero".format(e.base))
        out = base ** e.exponent
    elif isinstance(e, Operator):
        raise UnresolvedOperator("{}(...) must be resolved before evaluation".format(e.name))
    else:
        out = _MP_FUNCTIONS[type(e)](_mp_eval(e.arg, values, memo))
    memo[e] = out
    return out


def compile_array(e, operator=None):
    """
    Turn ``e`` into a function of a bindings dict evaluated with numpy broadcasting.

    Shared subtrees are evaluated once per call. ``operator(node, inner)``, when
    given, returns the function computing a dx/dxx/shift node from the
    function ``inner`` of its argument; grids use it for their stencils.
    """
    memo = dict()

    def build(node):
        if node in memo:
            return memo[node]
        if isinstance(node, Const):
            value = float(node.value)
            fn = lambda b, cache, v=value: v
        elif isinstance(node, Symbol):
            name = node.name

            def fn(b, cache, name=name):
                if name not in b:
                    raise UnboundSymbol(name)
                return b[name]
        elif isinstance(node, Sum):
            parts = [build(t) for t in node.terms]
            fn = _cached(node, lambda b, cache, parts=parts: sum(p(b, cache) for p in parts))
        elif isinstance(node, Product):
            parts = [build(f) for f in node.factors]

            def product(b, cache, parts=parts):
                out = 1.0
                for p in parts:
                    out = out * p(b, cache)
                return out
            fn = _cached(node, product)
        elif isinstance(node, IntPow):
            base = build(node.base)
            n = node.exponent
            fn = _cached(node, lambda b, cache, base=base, n=n: np.asarray(base(b, cache), dtype=float) ** n)
        elif isinstance(node, Operator):
            if operator is None:
                raise UnresolvedOperator("{}(...) must be resolved before evaluation".format(node.name))
            fn = _cached(node, operator(node, build(node.arg)))
        else:
            arg = build(node.arg)
            func = _NP_FUNCTIONS[type(node)]
            fn = _cached(node, lambda b, cache, arg=arg, func=func: func(arg(b, cache)))
        memo[node] = fn
        return fn

    root = build(e)

    def run(bindings):
        with np.errstate(over='ignore', divide='ignore', invalid='ignore'):
            return np.asarray(root(bindings, dict()), dtype=float)
    return run


def _cached(node, fn):
    def wrapped(b, cache):
        if node not in cache:
            cache[node] = fn(b, cache)
        return cache[node]
    return wrapped


def evaluate_array(e, bindings):
    """Double-precision evaluation of ``e``; bindings may hold numpy arrays."""
    bindings = {name: (float(v) if isinstance(v, Fraction) else v) for name, v in bindings.items()}
    return compile_array(e)(bindings)
