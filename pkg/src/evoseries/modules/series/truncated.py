"""
Truncated power series in t with Expr coefficients.

``TruncatedSeries(c)`` stands for c[0] + c[1]*t + ... + c[L-1]*t**(L-1);
results of binary operations keep the shorter length. Every coefficient is
kept in canonical form.
"""
from fractions import Fraction

from evoseries.modules.expr.nodes import Const, Cosh, Exp, IntPow, ONE, Product, Sech, Sinh, Sum, Tanh, ZERO, as_expr
from evoseries.modules.expr.simplify import simplify
from evoseries.modules.utils.errors import OrderOverflow


def _sum(items):
    items = [i for i in items if i != ZERO]
    if not items:
        return ZERO
    if len(items) == 1:
        return items[0]
    return simplify(Sum(items))


def _mul(a, b):
    if a == ZERO or b == ZERO:
        return ZERO
    if a == ONE:
        return b
    if b == ONE:
        return a
    return simplify(Product((a, b)))


def _scale(value, e):
    if value == 0:
        return ZERO
    return _mul(Const(value), e)


class TruncatedSeries:
    """
    Parameters
    ----------
    c : sequence of Expr (or numbers)
        Coefficients of t**0, t**1, ...
    length : int, optional
        Pad with zeros or cut to this many coefficients.
    budget : int, optional
        Largest allowed node count of a coefficient; exceeded -> OrderOverflow.
    """
    __slots__ = ('c', 'budget', 'label')

    def __init__(self, c, length=None, budget=None, label=''):
        c = [simplify(as_expr(x)) for x in c]
        if length is not None:
            c = (c + [ZERO] * length)[:length]
        if not c:
            raise ValueError("a truncated series needs at least one coefficient")
        self.c = tuple(c)
        self.budget = budget
        self.label = label
        if budget is not None:
            for j, x in enumerate(self.c):
                if x.size > budget:
                    raise OrderOverflow(label or '?', j, x.size, budget)

    @classmethod
    def constant(cls, e, length, budget=None):
        return cls([e], length=length, budget=budget)

    @property
    def length(self):
        return len(self.c)

    @property
    def order(self):
        return len(self.c) - 1

    def __getitem__(self, j):
        return self.c[j]

    def __iter__(self):
        return iter(self.c)

    def __len__(self):
        return len(self.c)

    def _new(self, c, other=None):
        budget = self.budget
        if other is not None and other.budget is not None:
            budget = other.budget if budget is None else min(budget, other.budget)
        return TruncatedSeries(c, budget=budget, label=self.label)

    def is_constant(self):
        return all(x == ZERO for x in self.c[1:])

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.constant(other, self.length)
        n = min(self.length, other.length)
        return self._new([_sum((self.c[j], other.c[j])) for j in range(n)], other)

    __radd__ = __add__

    def __neg__(self):
        return self._new([_scale(-1, x) for x in self.c])

    def __sub__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.constant(other, self.length)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = as_expr(other)
            return self._new([_mul(other, x) for x in self.c])
        n = min(self.length, other.length)
        if other.is_constant():
            return self._new([_mul(other.c[0], self.c[j]) for j in range(n)], other)
        if self.is_constant():
            return self._new([_mul(self.c[0], other.c[j]) for j in range(n)], other)
        out = []
        for k in range(n):
            out.append(_sum([_mul(self.c[i], other.c[k - i]) for i in range(k + 1)]))
        return self._new(out, other)

    __rmul__ = __mul__

    def reciprocal(self):
        inverse = simplify(IntPow(self.c[0], -1))
        out = [inverse]
        for k in range(1, self.length):
            tot = _sum([_mul(self.c[i], out[k - i]) for i in range(1, k + 1)])
            out.append(simplify(Product((Const(-1), inverse, tot))) if tot != ZERO else ZERO)
        return self._new(out)

    def __truediv__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.constant(other, self.length)
        return self * other.reciprocal()

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("series powers must be integers")
        if n == 0:
            return TruncatedSeries.constant(ONE, self.length, self.budget)
        if self.is_constant():
            return self._new([simplify(IntPow(self.c[0], n))] + [ZERO] * (self.length - 1))
        base = self if n > 0 else self.reciprocal()
        n = abs(n)
        result = None
        while n:
            if n % 2:
                result = base if result is None else result * base
            n //= 2
            if n:
                base = base * base
        return result

    def map(self, func):
        """Apply ``func`` to every coefficient (t-independent linear operators only)."""
        return self._new([simplify(func(x)) for x in self.c])

    def exp(self):
        if self.is_constant():
            return self._new([simplify(Exp(self.c[0]))] + [ZERO] * (self.length - 1))
        out = [simplify(Exp(self.c[0]))]
        for k in range(1, self.length):
            terms = [_mul(_scale(Fraction(i, k), self.c[i]), out[k - i]) for i in range(1, k + 1)]
            out.append(_sum(terms))
        return self._new(out)

    def cosh_sinh(self):
        """(cosh(s), sinh(s)) by the coupled recursions C' = S a', S' = C a'."""
        ch = [simplify(Cosh(self.c[0]))]
        sh = [simplify(Sinh(self.c[0]))]
        for k in range(1, self.length):
            ch.append(_sum([_mul(_scale(Fraction(i, k), self.c[i]), sh[k - i]) for i in range(1, k + 1)]))
            sh.append(_sum([_mul(_scale(Fraction(i, k), self.c[i]), ch[k - i]) for i in range(1, k + 1)]))
        return self._new(ch), self._new(sh)

    def _padded(self, head):
        return self._new([head] + [ZERO] * (self.length - 1))

    def cosh(self):
        if self.is_constant():
            return self._padded(simplify(Cosh(self.c[0])))
        return self.cosh_sinh()[0]

    def sinh(self):
        if self.is_constant():
            return self._padded(simplify(Sinh(self.c[0])))
        return self.cosh_sinh()[1]

    def tanh(self):
        """T' = (1 - T^2) a', with 1 - T^2 carried as its own series."""
        if self.is_constant():
            return self._padded(simplify(Tanh(self.c[0])))
        return self._new(self._tanh_coefficients())

    def _tanh_coefficients(self):
        out = [simplify(Tanh(self.c[0]))]
        rest = [simplify(IntPow(Sech(self.c[0]), 2))]
        for k in range(1, self.length):
            out.append(_sum([_mul(_scale(Fraction(i, k), self.c[i]), rest[k - i]) for i in range(1, k + 1)]))
            rest.append(_scale(-1, _sum([_mul(out[i], out[k - i]) for i in range(k + 1)])))
        return out

    def sech(self):
        """S' = -S T a'."""
        if self.is_constant():
            return self._padded(simplify(Sech(self.c[0])))
        tanh = self._tanh_coefficients()
        out = [simplify(Sech(self.c[0]))]
        for k in range(1, self.length):
            terms = []
            for i in range(1, k + 1):
                m = k - i
                st = _sum([_mul(out[r], tanh[m - r]) for r in range(m + 1)])
                terms.append(_mul(_scale(Fraction(-i, k), self.c[i]), st))
            out.append(_sum(terms))
        return self._new(out)

    def derivative(self):
        """d/dt, one coefficient shorter."""
        if self.length == 1:
            return self._new([ZERO])
        return self._new([_scale(j, self.c[j]) for j in range(1, self.length)])

    def to_expr(self, t):
        """Σ c_j t^j as a canonical Expr in the symbol ``t``."""
        t = as_expr(t)
        return simplify(Sum(tuple(Product((x, IntPow(t, j))) for j, x in enumerate(self.c))))

    def __repr__(self):
        return "TruncatedSeries([{}])".format(", ".join(str(x) for x in self.c))
