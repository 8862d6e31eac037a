"""
Canonical simplification.

The canonical form keeps sums and products flat, with at most one numeric
factor per product, like terms and like bases collected, integer powers
folded, exponentials merged and children in the fixed key order. It does
not distribute products over sums except for a numeric factor times a
lone sum, and inside the arguments of exp/tanh/sech/cosh/sinh, which are
always expanded. Unsimplified nested products are flattened before their
factors are simplified, so the result does not depend on how a product
was grouped.
"""
from fractions import Fraction
from functools import lru_cache

from evoseries.modules.expr.nodes import Const, Cosh, Exp, Expr, Function, IntPow, MINUS_ONE, ONE, Operator, \
    Product, Sech, Shift, Sinh, Sum, Symbol, Tanh, ZERO
from evoseries.modules.utils.errors import DegenerateExpression

ODD_FUNCTIONS = (Tanh, Sinh)
EVEN_FUNCTIONS = (Cosh, Sech)


def simplify(e):
    """
    Return the canonical form of ``e``.

    Parameters
    ----------
    e : Expr
        Any expression, canonical or not.

    Returns
    -------
    Expr : the canonical form; idempotent and value preserving.

    Raises
    ------
    DegenerateExpression
        If constant folding meets an exact division by zero.
    """
    if e.canonical:
        return e
    return _simplify(e)


@lru_cache(maxsize=1 << 16)
def _simplify(e):
    if isinstance(e, Sum):
        return _simplify_sum(e.terms)
    if isinstance(e, Product):
        return _simplify_product(e.factors)
    if isinstance(e, IntPow):
        if isinstance(e.base, Product) and not e.base.canonical:
            return simplify(Product(tuple(IntPow(f, e.exponent) for f in e.base.factors)))
        return _simplify_pow(simplify(e.base), e.exponent)
    if isinstance(e, Function):
        return _simplify_function(type(e), e.arg)
    if isinstance(e, Operator):
        arg = simplify(e.arg)
        if isinstance(e, Shift) and e.offset == 0:
            return arg
        return type(e)(arg, e.offset)._mark_canonical()
    return e._mark_canonical()


def split_term(term):
    """Split a canonical term into (rational coefficient, rest); rest is None for constants."""
    if isinstance(term, Const):
        return term.value, None
    if isinstance(term, Product) and isinstance(term.factors[0], Const):
        rest = term.factors[1:]
        if len(rest) == 1:
            return term.factors[0].value, rest[0]
        return term.factors[0].value, Product(rest)._mark_canonical()
    return Fraction(1), term


def make_term(coefficient, rest):
    if rest is None:
        return Const(coefficient)
    if coefficient == 1:
        return rest
    if isinstance(rest, Product):
        return Product((Const(coefficient),) + rest.factors)._mark_canonical()
    return Product((Const(coefficient), rest))._mark_canonical()


def _sorted(items):
    return sorted(items, key=lambda x: x.key)


def _simplify_sum(terms):
    flat = []
    for t in terms:
        s = simplify(t)
        if isinstance(s, Sum):
            flat.extend(s.terms)
        else:
            flat.append(s)
    constant = Fraction(0)
    coefficients = dict()
    for t in flat:
        c, rest = split_term(t)
        if rest is None:
            constant += c
        else:
            coefficients[rest] = coefficients.get(rest, 0) + c
    out = [make_term(c, rest) for rest, c in coefficients.items() if c != 0]
    if constant != 0:
        out.append(Const(constant))
    if not out:
        return ZERO
    if len(out) == 1:
        return out[0]
    return Sum(_sorted(out))._mark_canonical()


def _flatten(factors):
    for f in factors:
        if isinstance(f, Product) and not f.canonical:
            yield from _flatten(f.factors)
        else:
            yield f


def _simplify_product(factors):
    constant = Fraction(1)
    powers = dict()
    exp_args = []

    def absorb(f):
        nonlocal constant
        if isinstance(f, Const):
            constant *= f.value
        elif isinstance(f, Exp):
            exp_args.append(f.arg)
        elif isinstance(f, IntPow):
            powers[f.base] = powers.get(f.base, 0) + f.exponent
        else:
            powers[f] = powers.get(f, 0) + 1

    for f in _flatten(factors):
        s = simplify(f)
        if isinstance(s, Product):
            for inner in s.factors:
                absorb(inner)
        else:
            absorb(s)
    if constant == 0:
        return ZERO
    out = []
    if exp_args:
        merged = simplify(Exp(Sum(exp_args)) if len(exp_args) > 1 else Exp(exp_args[0]))
        if isinstance(merged, Const):
            constant *= merged.value
        else:
            out.append(merged)
    for base, n in powers.items():
        if n == 0:
            continue
        out.append(base if n == 1 else IntPow(base, n)._mark_canonical())
    if not out:
        return Const(constant)
    out = _sorted(out)
    if len(out) == 1:
        if constant == 1:
            return out[0]
        if isinstance(out[0], Sum):
            return simplify(Sum(tuple(Product((Const(constant), t)) for t in out[0].terms)))
    if constant == 1:
        return Product(out)._mark_canonical()
    return Product([Const(constant)] + out)._mark_canonical()


def _simplify_pow(base, n):
    if n == 0:
        return ONE
    if n == 1:
        return base
    if isinstance(base, Const):
        if base.value == 0 and n < 0:
            raise DegenerateExpression("division by zero: 0^{}".format(n))
        return Const(base.value ** n)
    if isinstance(base, IntPow):
        return _simplify_pow(base.base, base.exponent * n)
    if isinstance(base, Product):
        return simplify(Product(tuple(IntPow(f, n) for f in base.factors)))
    if isinstance(base, Exp):
        return simplify(Exp(Product((Const(n), base.arg))))
    return IntPow(base, n)._mark_canonical()


def _sign_score(arg):
    terms = arg.terms if isinstance(arg, Sum) else (arg,)
    score = 0
    for t in terms:
        c, _ = split_term(t)
        score += 1 if c > 0 else -1
    return score


def _prefer_negated(arg):
    score = _sign_score(arg)
    if score != 0:
        return score < 0
    negated = expand(Product((MINUS_ONE, arg)))
    return negated.key > arg.key


def _simplify_function(cls, arg):
    arg = expand(simplify(arg))
    if arg == ZERO:
        if cls in (Exp, Cosh, Sech):
            return ONE
        return ZERO
    if cls in ODD_FUNCTIONS and _prefer_negated(arg):
        negated = expand(Product((MINUS_ONE, arg)))
        return simplify(Product((MINUS_ONE, cls(negated))))
    if cls in EVEN_FUNCTIONS and _prefer_negated(arg):
        negated = expand(Product((MINUS_ONE, arg)))
        return cls(negated)._mark_canonical()
    return cls(arg)._mark_canonical()


@lru_cache(maxsize=1 << 14)
def expand(e):
    """
    Distribute products over sums and positive integer powers of sums.

    Negative powers and function arguments are left as their canonical
    forms (function arguments are already expanded by ``simplify``).
    """
    e = simplify(e)
    if isinstance(e, (Const, Symbol, Function)):
        return e
    if isinstance(e, Sum):
        return simplify(Sum(tuple(expand(t) for t in e.terms)))
    if isinstance(e, Product):
        terms = [ONE]
        for f in e.factors:
            terms = _multiply_out(terms, expand(f))
        return simplify(Sum(terms))
    if isinstance(e, IntPow):
        base = expand(e.base)
        if e.exponent > 1 and isinstance(base, Sum):
            terms = [ONE]
            for _ in range(e.exponent):
                terms = _multiply_out(terms, base)
            return simplify(Sum(terms))
        return simplify(IntPow(base, e.exponent))
    if isinstance(e, Operator):
        return simplify(type(e)(expand(e.arg), e.offset))
    return e


def _multiply_out(terms, factor):
    factor_terms = factor.terms if isinstance(factor, Sum) else (factor,)
    return [simplify(Product((a, b))) for a in terms for b in factor_terms]


def node_count(e: Expr) -> int:
    return e.size
