"""
Solvable problem/solution pairs the verifier must accept, and their
perturbed versions it must reject.
"""
from fractions import Fraction

from evoseries.modules.expr.calculus import substitute
from evoseries.modules.expr.nodes import Const, Product, Symbol
from evoseries.modules.load.problem import Claim, TIME, parse_problem

PERTURBATION = Fraction(1, 1000)

KNOWN_GOOD = {
    'heat': """
[problem]
kind = PDE
fields = u
[equations]
dt(u) = dxx(u)
[initial]
u = exp(x)
[claim.exact]
u = exp(x + t)
""",
    'growth': """
[problem]
kind = PDE
fields = u
[equations]
dt(u) = u
[initial]
u = 1
[claim.exact]
u = exp(t)
""",
    'advection': """
[problem]
kind = PDE
fields = u
[equations]
dt(u) = -dx(u)
[initial]
u = tanh(x)
[claim.exact]
u = tanh(x - t)
""",
    'kpp_front': """
[problem]
kind = PDE
fields = u
[equations]
dt(u) = dxx(u)/6 + u*(1 - u)
[initial]
u = 1/(1 + exp(x))^2
[claim.exact]
u = 1/(1 + exp(x - 5*t/6))^2
""",
    'lattice_drift': """
[problem]
kind = DDE
fields = u
[equations]
dt(u) = shift(u, 1) - shift(u, -1)
[initial]
u = n
[claim.exact]
u = n + 2*t
""",
}


def known_good(name):
    spec = parse_problem(KNOWN_GOOD[name])
    spec.name = name
    return spec


def perturbed_claim(claim, amount=PERTURBATION):
    """The claim with t replaced by (1 + amount)*t in every field."""
    scaled = Product((Const(1 + amount), Symbol(TIME)))
    solutions = {f: substitute(e, TIME, scaled) for f, e in claim.solutions.items()}
    return Claim(name=claim.name + '_perturbed', solutions=solutions, params=claim.params, lets=dict(claim.lets))


def known_good_suite():
    """(spec, exact claim, perturbed claim) for every pair."""
    out = []
    for name in KNOWN_GOOD:
        spec = known_good(name)
        claim = spec.claim('exact')
        out.append((spec, claim, perturbed_claim(claim)))
    return out
