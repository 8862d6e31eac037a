"""
Immutable expression nodes.

Every node carries a sort key built from its children's keys, so structural
equality, hashing and the total order used by the canonical form are all
decided by comparing keys. Nodes are never mutated after construction.
"""
from fractions import Fraction

KIND_CONST = 0
KIND_SYMBOL = 1
KIND_POW = 2
KIND_FUNCTION = 3
KIND_PRODUCT = 4
KIND_SUM = 5
KIND_OPERATOR = 6


def _canonical(e):
    from evoseries.modules.expr.simplify import simplify
    return simplify(e)


def as_expr(value):
    if isinstance(value, Expr):
        return value
    if isinstance(value, bool):
        raise TypeError("cannot convert bool to an expression")
    if isinstance(value, (int, Fraction)):
        return Const(value)
    if isinstance(value, str):
        return Symbol(value)
    raise TypeError("cannot convert {!r} to an expression".format(value))


class Expr:
    __slots__ = ('_key', '_hash', '_free', 'size', 'canonical')

    def _seal(self, key, size):
        object.__setattr__(self, '_key', key)
        object.__setattr__(self, '_hash', hash(key))
        object.__setattr__(self, '_free', None)
        object.__setattr__(self, 'size', size)
        object.__setattr__(self, 'canonical', False)

    def __setattr__(self, name, value):
        raise AttributeError("{} is immutable".format(type(self).__name__))

    def _mark_canonical(self):
        object.__setattr__(self, 'canonical', True)
        return self

    @property
    def key(self):
        return self._key

    @property
    def children(self):
        return ()

    @property
    def free_symbols(self):
        if self._free is None:
            names = frozenset()
            for child in self.children:
                names |= child.free_symbols
            object.__setattr__(self, '_free', names)
        return self._free

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Expr):
            return NotImplemented
        return self._hash == other._hash and self._key == other._key

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __lt__(self, other):
        return self._key < other._key

    def __add__(self, other):
        return _canonical(Sum((self, as_expr(other))))

    def __radd__(self, other):
        return _canonical(Sum((as_expr(other), self)))

    def __sub__(self, other):
        return _canonical(Sum((self, Product((Const(-1), as_expr(other))))))

    def __rsub__(self, other):
        return _canonical(Sum((as_expr(other), Product((Const(-1), self)))))

    def __neg__(self):
        return _canonical(Product((Const(-1), self)))

    def __mul__(self, other):
        return _canonical(Product((self, as_expr(other))))

    def __rmul__(self, other):
        return _canonical(Product((as_expr(other), self)))

    def __truediv__(self, other):
        return _canonical(Product((self, IntPow(as_expr(other), -1))))

    def __rtruediv__(self, other):
        return _canonical(Product((as_expr(other), IntPow(self, -1))))

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or isinstance(exponent, bool):
            raise TypeError("only integer exponents are supported, got {!r}".format(exponent))
        return _canonical(IntPow(self, exponent))

    def __repr__(self):
        from evoseries.modules.expr.printer import pretty
        return "{}({!r})".format(type(self).__name__, pretty(self))

    def __str__(self):
        from evoseries.modules.expr.printer import pretty
        return pretty(self)

    def __reduce__(self):
        return self._rebuild_args()

    def _rebuild_args(self):
        raise NotImplementedError


class Const(Expr):
    __slots__ = ('value',)

    def __init__(self, value):
        value = Fraction(value)
        object.__setattr__(self, 'value', value)
        self._seal((KIND_CONST, value), 1)
        self._mark_canonical()

    @property
    def free_symbols(self):
        return frozenset()

    def _rebuild_args(self):
        return Const, (self.value,)


class Symbol(Expr):
    __slots__ = ('name',)

    def __init__(self, name):
        object.__setattr__(self, 'name', name)
        self._seal((KIND_SYMBOL, name), 1)
        self._mark_canonical()

    @property
    def free_symbols(self):
        return frozenset((self.name,))

    def _rebuild_args(self):
        return Symbol, (self.name,)


class Sum(Expr):
    __slots__ = ('terms',)

    def __init__(self, terms):
        terms = tuple(as_expr(t) for t in terms)
        object.__setattr__(self, 'terms', terms)
        self._seal((KIND_SUM, tuple(t.key for t in terms)), 1 + sum(t.size for t in terms))

    @property
    def children(self):
        return self.terms

    def _rebuild_args(self):
        return Sum, (self.terms,)


class Product(Expr):
    __slots__ = ('factors',)

    def __init__(self, factors):
        factors = tuple(as_expr(f) for f in factors)
        object.__setattr__(self, 'factors', factors)
        self._seal((KIND_PRODUCT, tuple(f.key for f in factors)), 1 + sum(f.size for f in factors))

    @property
    def children(self):
        return self.factors

    def _rebuild_args(self):
        return Product, (self.factors,)


class IntPow(Expr):
    __slots__ = ('base', 'exponent')

    def __init__(self, base, exponent):
        if not isinstance(exponent, int) or isinstance(exponent, bool):
            raise TypeError("IntPow exponent must be an int, got {!r}".format(exponent))
        base = as_expr(base)
        object.__setattr__(self, 'base', base)
        object.__setattr__(self, 'exponent', exponent)
        self._seal((KIND_POW, base.key, exponent), 1 + base.size)

    @property
    def children(self):
        return (self.base,)

    def _rebuild_args(self):
        return IntPow, (self.base, self.exponent)


class Function(Expr):
    """A one-argument elementary function node."""
    __slots__ = ('arg',)
    name = None

    def __init__(self, arg):
        arg = as_expr(arg)
        object.__setattr__(self, 'arg', arg)
        self._seal((KIND_FUNCTION, self.name, arg.key), 1 + arg.size)

    @property
    def children(self):
        return (self.arg,)

    def _rebuild_args(self):
        return type(self), (self.arg,)


class Exp(Function):
    __slots__ = ()
    name = 'exp'


class Tanh(Function):
    __slots__ = ()
    name = 'tanh'


class Sech(Function):
    __slots__ = ()
    name = 'sech'


class Cosh(Function):
    __slots__ = ()
    name = 'cosh'


class Sinh(Function):
    __slots__ = ()
    name = 'sinh'


FUNCTIONS = {cls.name: cls for cls in (Exp, Tanh, Sech, Cosh, Sinh)}


class Operator(Expr):
    """
    dx/dxx/shift placeholders produced by the parser.

    They are kept symbolic until a consumer resolves them against concrete
    field expressions (see ``calculus.apply_fields``) or truncated series.
    """
    __slots__ = ('arg', 'offset')
    name = None

    def __init__(self, arg, offset=0):
        arg = as_expr(arg)
        object.__setattr__(self, 'arg', arg)
        object.__setattr__(self, 'offset', int(offset))
        self._seal((KIND_OPERATOR, self.name, arg.key, int(offset)), 1 + arg.size)

    @property
    def children(self):
        return (self.arg,)

    def _rebuild_args(self):
        return type(self), (self.arg, self.offset)


class Dx(Operator):
    __slots__ = ()
    name = 'dx'


class Dxx(Operator):
    __slots__ = ()
    name = 'dxx'


class Shift(Operator):
    __slots__ = ()
    name = 'shift'


OPERATORS = {cls.name: cls for cls in (Dx, Dxx, Shift)}

ZERO = Const(0)
ONE = Const(1)
MINUS_ONE = Const(-1)


def has_operators(e):
    if isinstance(e, Operator):
        return True
    return any(has_operators(c) for c in e.children)


def rebuild(e, children):
    """Return a node of the same kind as ``e`` over new ``children`` (not simplified)."""
    if isinstance(e, Sum):
        return Sum(children)
    if isinstance(e, Product):
        return Product(children)
    if isinstance(e, IntPow):
        return IntPow(children[0], e.exponent)
    if isinstance(e, Function):
        return type(e)(children[0])
    if isinstance(e, Operator):
        return type(e)(children[0], e.offset)
    return e
