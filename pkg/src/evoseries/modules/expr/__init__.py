from evoseries.modules.expr.nodes import Const, Cosh, Dx, Dxx, Exp, Expr, FUNCTIONS, IntPow, MINUS_ONE, ONE, \
    OPERATORS, Operator, Product, Sech, Shift, Sinh, Sum, Symbol, Tanh, ZERO, as_expr, has_operators
from evoseries.modules.expr.simplify import expand, simplify
from evoseries.modules.expr.calculus import apply_fields, differentiate, shift_space, substitute, substitute_all
from evoseries.modules.expr.evaluate import compile_array, evaluate, evaluate_array
from evoseries.modules.expr.atoms import ExpAtom, RationalFunctionForm, from_sympy, to_exp_atoms
from evoseries.modules.expr.zero import ProvenNonZero, ProvenZero, Unknown, ZeroVerdict, default_samples, \
    is_zero, prove_zero, sample_verdict, scan_samples
from evoseries.modules.expr.printer import pretty
