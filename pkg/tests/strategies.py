"""hypothesis strategies for raw (not yet simplified) expression trees over x and y."""
from hypothesis import strategies as st

from evoseries.modules.expr.nodes import Const, Cosh, Exp, IntPow, Product, Sech, Sinh, Sum, Symbol, Tanh

SYMBOLS = ('x', 'y')

small = st.fractions(min_value=-3, max_value=3, max_denominator=4)
constants = small.map(Const)
symbols = st.sampled_from(SYMBOLS).map(Symbol)
leaves = st.one_of(constants, symbols)

# function arguments stay linear in one symbol so values stay moderate
linear = st.builds(lambda a, s, b: Sum((Product((Const(a), Symbol(s))), Const(b))),
                   st.fractions(min_value=-2, max_value=2, max_denominator=2),
                   st.sampled_from(SYMBOLS),
                   st.fractions(min_value=-1, max_value=1, max_denominator=2))
functions = st.builds(lambda cls, arg: cls(arg), st.sampled_from((Exp, Tanh, Sech, Cosh, Sinh)), linear)


def _extend(children):
    # negative powers only of bases bounded away from zero
    return st.one_of(
        st.lists(children, min_size=2, max_size=3).map(lambda items: Sum(tuple(items))),
        st.lists(children, min_size=2, max_size=3).map(lambda items: Product(tuple(items))),
        st.builds(IntPow, children, st.integers(min_value=1, max_value=3)),
        st.builds(lambda e, n: IntPow(Sum((Const(2), Tanh(e))), -n), children, st.integers(min_value=1, max_value=2)),
        st.builds(lambda e, n: IntPow(Sum((Const(1), Exp(Tanh(e)))), -n), children,
                  st.integers(min_value=1, max_value=2)),
    )


expressions = st.recursive(st.one_of(leaves, functions), _extend, max_leaves=6)

coordinates = st.fractions(min_value=-1, max_value=1, max_denominator=8)
bindings = st.fixed_dictionaries({'x': coordinates, 'y': coordinates})
