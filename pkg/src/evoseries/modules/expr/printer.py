"""
Infix printing that parse_expression reads back to the same canonical form.
"""
from fractions import Fraction

from evoseries.modules.expr.nodes import Const, Function, IntPow, Operator, Product, Shift, Sum, Symbol

PREC_SUM = 10
PREC_PRODUCT = 20
PREC_UNARY = 25
PREC_POW = 30
PREC_ATOM = 40


def pretty(e):
    text, _ = _render(e)
    return text


def _const(value):
    if value.denominator == 1:
        return str(value.numerator), (PREC_ATOM if value >= 0 else PREC_UNARY)
    text = "{}/{}".format(value.numerator, value.denominator)
    return text, (PREC_PRODUCT if value > 0 else PREC_UNARY)


def _wrap(item, prec):
    text, own = item
    return text if own >= prec else "(" + text + ")"


def _render(e):
    if isinstance(e, Const):
        return _const(e.value)
    if isinstance(e, Symbol):
        return e.name, PREC_ATOM
    if isinstance(e, Function):
        return "{}({})".format(e.name, pretty(e.arg)), PREC_ATOM
    if isinstance(e, Operator):
        if isinstance(e, Shift):
            return "shift({}, {})".format(pretty(e.arg), e.offset), PREC_ATOM
        return "{}({})".format(e.name, pretty(e.arg)), PREC_ATOM
    if isinstance(e, Sum):
        return _render_sum(e)
    if isinstance(e, Product):
        negative, text, prec = _render_product(e.factors)
        return ("-" + text, PREC_UNARY) if negative else (text, prec)
    if isinstance(e, IntPow):
        if e.exponent < 0:
            negative, text, prec = _render_product((e,))
            return text, prec
        return _power(e.base, e.exponent), PREC_POW
    raise TypeError("cannot print {}".format(type(e).__name__))


def _power(base, exponent):
    base_text = _wrap(_render(base), PREC_ATOM)
    if exponent < 0:
        return "{}^({})".format(base_text, exponent)
    return "{}^{}".format(base_text, exponent)


def _render_product(factors):
    coefficient = Fraction(1)
    numerator, denominator = [], []
    for f in factors:
        if isinstance(f, Const):
            coefficient *= f.value
        elif isinstance(f, IntPow) and f.exponent < 0:
            denominator.append(f.base if f.exponent == -1 else IntPow(f.base, -f.exponent))
        else:
            numerator.append(f)
    negative = coefficient < 0
    coefficient = abs(coefficient)
    num_items = [_wrap(_render(f), PREC_PRODUCT + 1) for f in numerator]
    if coefficient.numerator != 1 or not num_items:
        num_items.insert(0, str(coefficient.numerator))
    den_items = [_wrap(_render(f), PREC_PRODUCT + 1) for f in denominator]
    if coefficient.denominator != 1:
        den_items.insert(0, str(coefficient.denominator))
    text = "*".join(num_items)
    if not den_items:
        prec = PREC_PRODUCT if len(num_items) > 1 else _render(numerator[0])[1] if numerator else PREC_ATOM
        return negative, text, prec
    if len(den_items) == 1:
        text += "/" + den_items[0]
    else:
        text += "/(" + "*".join(den_items) + ")"
    return negative, text, PREC_PRODUCT


def _term(t):
    if isinstance(t, Const):
        return t.value < 0, _const(abs(t.value))[0]
    if isinstance(t, Product):
        negative, text, prec = _render_product(t.factors)
        return negative, text if prec >= PREC_PRODUCT else "(" + text + ")"
    return False, _wrap(_render(t), PREC_SUM + 1)


def _render_sum(e):
    parts = []
    for i, t in enumerate(e.terms):
        negative, text = _term(t)
        if i == 0:
            parts.append("-" + text if negative else text)
        else:
            parts.append((" - " if negative else " + ") + text)
    return "".join(parts), PREC_SUM
