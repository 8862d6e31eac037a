"""
Exp-atom normal form.

Every exp/tanh/sech/cosh/sinh is rewritten through exponentials. Each
additive term ``c*m`` of an exponent (``c`` rational, ``m`` the rest, or 1 for
the constant term) becomes the atom ``exp(m/d_m)`` raised to ``c*d_m``, where
``d_m`` is the lcm of the denominators of all coefficients ``m`` carries in
the expression. The result is a rational function over the atoms and the
plain symbols, cancelled by sympy.
"""
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import sympy

from evoseries.modules.expr.nodes import Const, Cosh, Exp, Function, IntPow, ONE, Operator, Product, Sech, Sinh, \
    Sum, Symbol, Tanh
from evoseries.modules.expr.simplify import expand, simplify, split_term
from evoseries.modules.utils.errors import AtomMergeFailure, UnresolvedOperator

ATOM_PREFIX = '_E'


@dataclass(frozen=True)
class ExpAtom:
    name: str
    monomial: object
    denominator: int
    opaque: bool = False

    @property
    def argument(self):
        return simplify(Product((Const(Fraction(1, self.denominator)), self.monomial)))

    def to_expr(self):
        return simplify(Exp(self.argument))


@dataclass(frozen=True)
class RationalFunctionForm:
    """
    Cancelled numerator/denominator polynomials over exp-atoms and symbols.

    ``numerator`` and ``denominator`` are ``sympy.Poly`` objects sharing ``gens``.
    """
    numerator: sympy.Poly
    denominator: sympy.Poly
    atoms: tuple
    symbols: tuple

    @property
    def is_zero(self):
        return self.numerator.is_zero

    @property
    def is_constant(self):
        return self.numerator.is_ground and self.denominator.is_ground

    @property
    def opaque(self):
        return any(a.opaque for a in self.atoms)

    def to_expr(self):
        """Convert back into a canonical Expr; the denominator is kept factored."""
        lookup = {a.name: a.to_expr() for a in self.atoms}
        num = from_sympy(self.numerator.as_expr(), lookup)
        den = from_sympy(sympy.factor(self.denominator.as_expr()), lookup)
        return simplify(Product((num, IntPow(den, -1))))

    def __str__(self):
        return "({}) / ({})".format(self.numerator.as_expr(), self.denominator.as_expr())


def _contains_transcendental(e):
    if isinstance(e, Function):
        return True
    return any(_contains_transcendental(c) for c in e.children)


def _exponent_terms(arg):
    arg = expand(arg)
    terms = arg.terms if isinstance(arg, Sum) else (arg,)
    out = []
    for t in terms:
        c, rest = split_term(t)
        out.append((c, ONE if rest is None else rest))
    return out


def _collect_functions(e, found):
    if isinstance(e, Operator):
        raise UnresolvedOperator("{}(...) must be resolved before normalisation".format(e.name))
    if isinstance(e, Function):
        found.append(e)
    for c in e.children:
        _collect_functions(c, found)


def _collect_atoms(e):
    functions = []
    _collect_functions(e, functions)
    denominators = dict()
    for f in functions:
        for c, m in _exponent_terms(f.arg):
            denominators[m] = lcm(denominators.get(m, 1), c.denominator)
    atoms = dict()
    for i, m in enumerate(sorted(denominators, key=lambda x: x.key)):
        atoms[m] = ExpAtom(name="{}{}".format(ATOM_PREFIX, i), monomial=m, denominator=denominators[m],
                           opaque=_contains_transcendental(m))
    return atoms


def to_exp_atoms(e, strict=False):
    """
    Rewrite ``e`` as a cancelled rational function over exp-atoms.

    Parameters
    ----------
    e : Expr
    strict : bool
        Raise AtomMergeFailure instead of keeping opaque atoms (exponent
        monomials that contain transcendental nodes).

    Returns
    -------
    RationalFunctionForm
    """
    e = simplify(e)
    atoms = _collect_atoms(e)
    if strict:
        opaque = [a for a in atoms.values() if a.opaque]
        if opaque:
            raise AtomMergeFailure("exponent monomials {} cannot be merged rationally".format(
                ", ".join(str(a.monomial) for a in opaque)))
    generators = {m: sympy.Symbol(a.name) for m, a in atoms.items()}
    symbols = dict()
    memo = dict()

    def power(arg):
        out = sympy.Integer(1)
        for c, m in _exponent_terms(arg):
            exponent = c * atoms[m].denominator
            out *= generators[m] ** int(exponent)
        return out

    def convert(node):
        if node in memo:
            return memo[node]
        if isinstance(node, Const):
            out = sympy.Rational(node.value.numerator, node.value.denominator)
        elif isinstance(node, Symbol):
            if node.name not in symbols:
                symbols[node.name] = sympy.Symbol(node.name)
            out = symbols[node.name]
        elif isinstance(node, Sum):
            out = sympy.Add(*[convert(t) for t in node.terms])
        elif isinstance(node, Product):
            out = sympy.Mul(*[convert(f) for f in node.factors])
        elif isinstance(node, IntPow):
            out = convert(node.base) ** node.exponent
        else:
            x = power(node.arg)
            if isinstance(node, Exp):
                out = x
            elif isinstance(node, Tanh):
                out = (x ** 2 - 1) / (x ** 2 + 1)
            elif isinstance(node, Sech):
                out = 2 * x / (x ** 2 + 1)
            elif isinstance(node, Cosh):
                out = (x ** 2 + 1) / (2 * x)
            elif isinstance(node, Sinh):
                out = (x ** 2 - 1) / (2 * x)
            else:
                raise TypeError("cannot normalise {}".format(type(node).__name__))
        memo[node] = out
        return out

    cancelled = sympy.cancel(sympy.together(convert(e)))
    num, den = sympy.fraction(cancelled)
    gens = [generators[m] for m in sorted(generators, key=lambda x: x.key)]
    gens += [symbols[name] for name in sorted(symbols)]
    if not gens:
        gens = [sympy.Symbol(ATOM_PREFIX)]
    return RationalFunctionForm(numerator=sympy.Poly(num, *gens, domain='QQ'),
                                denominator=sympy.Poly(den, *gens, domain='QQ'),
                                atoms=tuple(atoms[m] for m in sorted(atoms, key=lambda x: x.key)),
                                symbols=tuple(sorted(symbols)))


def from_sympy(s, atoms=None):
    """Convert a sympy rational expression back into an Expr; atom generators map through ``atoms``."""
    atoms = atoms or dict()
    if s.is_Rational:
        return Const(Fraction(int(s.p), int(s.q)))
    if s.is_Symbol:
        if s.name in atoms:
            return atoms[s.name]
        return Symbol(s.name)
    if s.is_Add:
        return simplify(Sum(tuple(from_sympy(a, atoms) for a in s.args)))
    if s.is_Mul:
        return simplify(Product(tuple(from_sympy(a, atoms) for a in s.args)))
    if s.is_Pow and s.exp.is_Integer:
        return simplify(IntPow(from_sympy(s.base, atoms), int(s.exp)))
    raise TypeError("cannot convert {} back into an expression".format(s))
