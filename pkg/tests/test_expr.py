from fractions import Fraction

import mpmath
import numpy as np
import pytest
import sympy
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from evoseries.modules.expr.atoms import to_exp_atoms
from evoseries.modules.expr.calculus import apply_fields, differentiate, shift_space, substitute, substitute_all
from evoseries.modules.expr.evaluate import check_precision, evaluate, evaluate_array, to_mpf
from evoseries.modules.expr.nodes import Const, Dx, IntPow, ONE, Product, Sum, Symbol, ZERO, rebuild
from evoseries.modules.expr.simplify import expand, simplify
from evoseries.modules.expr.zero import ProvenNonZero, ProvenZero, Unknown, is_zero, prove_zero, sample_verdict
from evoseries.modules.load.parser import parse_expression as P
from evoseries.modules.utils.errors import DegenerateExpression, PoleEvaluation, UnboundSymbol, \
    UnresolvedOperator, ValidationError
from strategies import bindings, expressions

PRECISION = 30


def fuzz(examples):
    return settings(max_examples=examples, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def unmarked(e):
    """A structurally equal copy whose inner nodes are not flagged canonical."""
    if not e.children:
        return e
    return rebuild(e, tuple(unmarked(c) for c in e.children))


def close(a, b, rel=1e-12):
    return abs(a - b) <= rel * (1 + abs(b))


def test_simplify_collects_like_terms():
    x, y = Symbol('x'), Symbol('y')
    assert simplify(Sum((x, Product((Const(0), y)), x))) == P("2*x")
    assert P("x + 0*y + x") == P("2*x")


def test_simplify_folds_functions_at_zero():
    assert P("exp(0)") == ONE
    assert P("tanh(0)") == ZERO
    assert P("sech(0) + cosh(0)") == Const(2)


def test_simplify_merges_exponentials():
    assert P("exp(x)*exp(x/2)") == P("exp(3*x/2)")
    assert P("exp(x)^2") == P("exp(2*x)")
    assert P("exp(x)*exp(-x)") == ONE


def test_simplify_odd_and_even_functions():
    assert P("tanh(-x)") == P("-tanh(x)")
    assert P("sinh(-x) + sinh(x)") == ZERO
    assert P("cosh(-x)") == P("cosh(x)")
    assert P("sech(-2*x)") == P("sech(2*x)")


def test_division_by_zero_is_degenerate():
    with pytest.raises(DegenerateExpression):
        simplify(IntPow(Const(0), -1))
    with pytest.raises(DegenerateExpression):
        P("1/(x - x)")


def test_nodes_are_immutable_and_hashable():
    e = P("x*y + 1")
    with pytest.raises(AttributeError):
        e.size = 3
    assert e.free_symbols == frozenset({'x', 'y'})
    assert {e: 1}[P("1 + y*x")] == 1
    assert Symbol('x') + 0 == Symbol('x')
    with pytest.raises(TypeError):
        Symbol('x') ** Fraction(1, 2)


def test_differentiate_examples():
    assert differentiate(P("tanh(k*x)"), 'x') == P("k*sech(k*x)^2")
    assert differentiate(P("c"), 'x') == ZERO
    assert differentiate(P("sech(x)"), 'x') == P("-sech(x)*tanh(x)")
    assert differentiate(P("x^-2"), 'x') == P("-2/x^3")
    assert differentiate(P("cosh(2*x)"), Symbol('x')) == P("2*sinh(2*x)")


def test_differentiate_rejects_unresolved_operators():
    with pytest.raises(UnresolvedOperator):
        differentiate(Dx(Symbol('x')), 'x')


def test_substitute_examples():
    wave = P("1/(1 + exp(k*z/2))")
    at_zero = substitute(substitute(wave, 'z', P("x + x*t")), 't', ZERO)
    assert at_zero == P("1/(1 + exp(k*x/2))")
    assert substitute(P("tanh(k*n + c)"), 'n', P("n + 1")) == P("tanh(k*n + k + c)")
    assert substitute(P("x + y"), 'z', Const(5)) == P("x + y")
    assert shift_space(P("n^2"), 'n', -1) == P("(n - 1)^2")


def test_substitute_all_is_simultaneous():
    assert substitute_all(P("x - y"), {'x': Symbol('y'), 'y': Symbol('x')}) == P("y - x")


def test_substitute_folding_to_a_pole_is_degenerate():
    with pytest.raises(DegenerateExpression):
        substitute(P("1/(x - 1)"), 'x', ONE)


def test_apply_fields_resolves_operators():
    rhs = P("u*(1 - u - v) + dxx(u)")
    resolved = apply_fields(rhs, {'u': P("exp(x)"), 'v': ZERO}, 'x')
    assert resolved == P("exp(x)*(1 - exp(x)) + exp(x)")
    lattice = P("shift(u, 1) - shift(u, -1)")
    assert expand(apply_fields(lattice, {'u': P("n^2")}, 'n')) == P("4*n")


def test_exp_atoms_of_tanh():
    form = to_exp_atoms(P("tanh(x)"))
    assert len(form.atoms) == 1
    e = sympy.Symbol(form.atoms[0].name)
    ratio = form.numerator.as_expr() / form.denominator.as_expr()
    assert sympy.simplify(ratio - (e ** 2 - 1) / (e ** 2 + 1)) == 0


def test_exp_atoms_merge_powers():
    form = to_exp_atoms(P("exp(x)*exp(x/2)"))
    assert len(form.atoms) == 1
    atom = form.atoms[0]
    assert atom.denominator == 2
    assert atom.argument == P("x/2")
    assert form.numerator.as_expr() == sympy.Symbol(atom.name) ** 3
    assert form.denominator.as_expr() == 1


def test_exp_atoms_identity_is_constant():
    form = to_exp_atoms(P("sech(x)^2 + tanh(x)^2"))
    assert form.is_constant
    assert form.numerator == form.denominator


@pytest.mark.parametrize('text', [
    "tanh(x)^2 + sech(x)^2 - 1",
    "cosh(x)^2 - sinh(x)^2 - 1",
    "tanh(k*x)^2 + sech(k*x)^2 - 1",
    "2*sinh(x)*cosh(x) - sinh(2*x)",
    "exp(x)/(1 + exp(x)) - 1/(1 + exp(-x))",
])
def test_identities_are_proven_zero(text):
    assert isinstance(is_zero(P(text)), ProvenZero)


def test_nonzero_witness():
    verdict = is_zero(P("exp(x) - 1"))
    assert isinstance(verdict, ProvenNonZero)
    assert verdict.witness == {'x': 1}
    assert float(verdict.magnitude) == pytest.approx(1.718281828459045)


def test_constants():
    assert isinstance(is_zero(ZERO), ProvenZero)
    verdict = is_zero(Const(Fraction(1, 2)))
    assert isinstance(verdict, ProvenNonZero) and verdict.witness == {}
    assert isinstance(is_zero(Const(Fraction(1, 10 ** 9))), Unknown)


def test_small_values_stay_unknown():
    # sampling alone never proves zero
    assert isinstance(is_zero(P("exp(x)/1000000000")), Unknown)


def test_all_poles_is_unknown():
    verdict, worst, values = sample_verdict(P("1/(x - 1)"), samples=[{'x': 1}])
    assert isinstance(verdict, Unknown)
    assert worst is None
    assert values == [({'x': 1}, None)]


def test_unresolved_operator_is_unknown():
    assert isinstance(is_zero(P("dx(u) - 1")), Unknown)


def test_evaluate_examples():
    assert evaluate(P("exp(-k*x)/(1 + exp(-k*x/2))^2"), {'x': 0, 'k': 1}) == mpmath.mpf(1) / 4
    assert evaluate(P("1/(1 + exp(-k*x/2))"), {'x': 0, 'k': 7}) == mpmath.mpf(1) / 2
    assert evaluate(P("tanh(0)"), {}) == 0
    assert float(evaluate(P("x/3"), {'x': '0.3'}, precision=40)) == pytest.approx(0.1, rel=1e-15)


def test_evaluate_errors():
    with pytest.raises(UnboundSymbol):
        evaluate(P("x + y"), {'x': 1})
    with pytest.raises(PoleEvaluation):
        evaluate(P("1/(x - 1)"), {'x': 1})
    with pytest.raises(UnresolvedOperator):
        evaluate(Dx(Symbol('u')), {'u': 1})
    with pytest.raises(ValidationError):
        check_precision(10)


def test_evaluate_array_broadcasts():
    values = evaluate_array(P("x^2 + tanh(y)"), {'x': np.array([1.0, 2.0]), 'y': 0.0})
    np.testing.assert_allclose(values, [1.0, 4.0])
    assert evaluate_array(P("3/4"), {}) == pytest.approx(0.75)


@fuzz(1000)
@given(expressions)
def test_simplify_is_idempotent(e):
    s = simplify(e)
    assert simplify(unmarked(s)) == s


@fuzz(300)
@given(expressions, bindings)
def test_simplify_preserves_value(e, b):
    assert close(evaluate(simplify(e), b, PRECISION), evaluate(e, b, PRECISION), rel=1e-20)


@fuzz(500)
@given(expressions, bindings)
def test_derivative_matches_finite_difference(e, b):
    derivative = evaluate(differentiate(e, 'x'), b, PRECISION)
    with mpmath.workdps(PRECISION):
        numeric = mpmath.diff(lambda x: evaluate(e, {'x': x, 'y': b['y']}, PRECISION), to_mpf(b['x']))
    assert close(derivative, numeric, rel=1e-10)


@fuzz(200)
@given(expressions, expressions, bindings)
def test_product_rule(a, c, b):
    lhs = differentiate(a * c, 'x')
    rhs = differentiate(a, 'x') * c + a * differentiate(c, 'x')
    assert close(evaluate(lhs, b, PRECISION), evaluate(rhs, b, PRECISION), rel=1e-18)


@fuzz(200)
@given(expressions, bindings, st.sampled_from(["2*x", "x + 1", "tanh(x)"]))
def test_substitution_commutes_with_derivative(e, b, replacement):
    r = P(replacement)
    lhs = differentiate(substitute(e, 'y', r), 'x')
    rhs = substitute(differentiate(e, 'x'), 'y', r) + substitute(differentiate(e, 'y'), 'y', r) * differentiate(r, 'x')
    assert close(evaluate(lhs, b, PRECISION), evaluate(rhs, b, PRECISION), rel=1e-18)


@fuzz(150)
@given(expressions, bindings)
def test_zero_verdicts_are_sound(e, b):
    difference = simplify(Sum((e, Product((Const(-1), expand(e))))))
    assert not isinstance(is_zero(difference), ProvenNonZero)
    if prove_zero(e):
        assert abs(evaluate(e, b, PRECISION)) < mpmath.mpf(10) ** -20
    verdict = is_zero(e)
    if isinstance(verdict, ProvenNonZero):
        assert set(verdict.witness) == e.free_symbols
        assert abs(evaluate(e, verdict.witness, PRECISION)) > 1e-6


@pytest.mark.parametrize('e', [
    Sum((Symbol('x'), Product((Const(-1), Symbol('x'))), P("exp(y)"))),
    Sum((Symbol('x'), Product((Const(-1), Symbol('x'))), Const(3))),
])
def test_witness_binds_cancelled_symbols(e):
    verdict = is_zero(e)
    assert isinstance(verdict, ProvenNonZero)
    assert set(verdict.witness) >= {'x'}
    assert abs(evaluate(e, verdict.witness, PRECISION)) > 1

