from functools import lru_cache

from evoseries.modules.expr.nodes import Const, Cosh, Dx, Dxx, Exp, IntPow, MINUS_ONE, ONE, Operator, Product, \
    Sech, Shift, Sinh, Sum, Symbol, Tanh, ZERO, as_expr, rebuild
from evoseries.modules.expr.simplify import simplify
from evoseries.modules.utils.errors import UnresolvedOperator


def _name(s):
    return s.name if isinstance(s, Symbol) else s


def differentiate(e, s):
    """
    Exact derivative of ``e`` with respect to the symbol ``s``, in canonical form.

    Parameters
    ----------
    e : Expr
        Expression without unresolved dx/dxx/shift nodes depending on ``s``.
    s : str or Symbol
        Symbol to differentiate by.

    Returns
    -------
    Expr : canonical derivative.
    """
    return _differentiate(simplify(as_expr(e)), _name(s))


@lru_cache(maxsize=1 << 15)
def _differentiate(e, s):
    if s not in e.free_symbols:
        return ZERO
    if isinstance(e, Symbol):
        return ONE
    if isinstance(e, Sum):
        return simplify(Sum(tuple(_differentiate(t, s) for t in e.terms)))
    if isinstance(e, Product):
        terms = []
        for i, f in enumerate(e.factors):
            df = _differentiate(f, s)
            if df == ZERO:
                continue
            terms.append(Product(e.factors[:i] + (df,) + e.factors[i + 1:]))
        return simplify(Sum(terms))
    if isinstance(e, IntPow):
        n = e.exponent
        return simplify(Product((Const(n), IntPow(e.base, n - 1), _differentiate(e.base, s))))
    if isinstance(e, Operator):
        raise UnresolvedOperator("cannot differentiate {}(...) by {} before it is resolved".format(e.name, s))
    a = e.arg
    da = _differentiate(a, s)
    if isinstance(e, Exp):
        outer = e
    elif isinstance(e, Tanh):
        outer = IntPow(Sech(a), 2)
    elif isinstance(e, Sech):
        outer = Product((MINUS_ONE, Sech(a), Tanh(a)))
    elif isinstance(e, Cosh):
        outer = Sinh(a)
    elif isinstance(e, Sinh):
        outer = Cosh(a)
    else:
        raise TypeError("no derivative rule for {}".format(type(e).__name__))
    return simplify(Product((outer, da)))


def substitute_all(e, mapping):
    """Replace every symbol named in ``mapping`` simultaneously and simplify."""
    mapping = {_name(k): as_expr(v) for k, v in mapping.items()}
    if not mapping:
        return simplify(e)
    names = frozenset(mapping)
    memo = dict()

    def walk(node):
        if not (node.free_symbols & names):
            return node
        if node in memo:
            return memo[node]
        if isinstance(node, Symbol):
            out = mapping[node.name]
        else:
            out = rebuild(node, tuple(walk(c) for c in node.children))
        memo[node] = out
        return out

    return simplify(walk(as_expr(e)))


def substitute(e, s, r):
    """
    Replace symbol ``s`` by ``r`` in ``e``; the result is canonical.

    Raises DegenerateExpression when the replacement folds a denominator to 0.
    """
    return substitute_all(e, {_name(s): r})


def shift_space(e, space, offset):
    if offset == 0:
        return simplify(e)
    return substitute(e, space, Sum((Symbol(space), Const(offset))))


def apply_fields(e, fields, space):
    """
    Replace field symbols by expressions and resolve operator nodes.

    ``dx``/``dxx`` become derivatives in ``space``; ``shift(f, s)`` becomes ``f`` with
    ``space`` replaced by ``space + s``.

    Parameters
    ----------
    e : Expr
        Right-hand side or any expression over field symbols.
    fields : dict
        Field name -> Expr.
    space : str
        The space symbol, x or n.
    """
    fields = {_name(k): as_expr(v) for k, v in fields.items()}
    space = _name(space)
    memo = dict()

    def resolve(node):
        if node in memo:
            return memo[node]
        if isinstance(node, Symbol):
            out = fields.get(node.name, node)
        elif isinstance(node, Operator):
            inner = simplify(resolve(node.arg))
            if isinstance(node, Dx):
                out = _differentiate(inner, space)
            elif isinstance(node, Dxx):
                out = _differentiate(_differentiate(inner, space), space)
            elif isinstance(node, Shift):
                out = shift_space(inner, space, node.offset)
            else:
                raise UnresolvedOperator("unknown operator {}".format(node.name))
        elif node.children:
            out = rebuild(node, tuple(resolve(c) for c in node.children))
        else:
            out = node
        memo[node] = out
        return out

    return simplify(resolve(as_expr(e)))
