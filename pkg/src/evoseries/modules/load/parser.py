"""
Pratt parser for expression strings.

Binding powers: ``^`` 30 (right associative), unary minus 25, ``*`` and ``/``
20, ``+`` and ``-`` 10. Numbers are exact rationals, so ``0.1`` is 1/10.
"""
import re
from collections import namedtuple
from fractions import Fraction

from evoseries.modules.expr.nodes import Const, FUNCTIONS, IntPow, MINUS_ONE, OPERATORS, Product, Shift, Sum, \
    Symbol
from evoseries.modules.expr.simplify import simplify
from evoseries.modules.utils.errors import SourceError

Token = namedtuple('Token', ['kind', 'text', 'column'])

_TOKEN_RE = re.compile(r'\s*(?:(?P<number>\d+\.\d*|\.\d+|\d+)|(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*/^(),]))')

BINDING_POWER = {'+': 10, '-': 10, '*': 20, '/': 20, '^': 30}
UNARY_POWER = 25
END = 'end'


def tokenize(text, line=1, column=1):
    """Split ``text`` into tokens; ``column`` is the 1-based column of text[0] in its source line."""
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == '':
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise SourceError(line, column + bad, "unexpected character", text[bad])
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append(Token(kind, m.group(kind), column + start))
        pos = m.end()
    tokens.append(Token(END, '', column + max(len(text.rstrip()) - 1, 0)))
    return tokens


class Parser:
    def __init__(self, text, line=1, column=1):
        self._tokens = tokenize(text, line, column)
        self._index = 0
        self._line = line
        self._open = []

    @property
    def token(self):
        return self._tokens[self._index]

    def advance(self):
        token = self.token
        if token.kind != END:
            self._index += 1
        return token

    def error(self, token, message):
        return SourceError(self._line, token.column, message, token.text)

    def parse(self):
        tree = self.expr(0)
        if self.token.kind != END:
            if self.token.text == ')':
                raise self.error(self.token, "unbalanced parenthesis")
            raise self.error(self.token, "unexpected token")
        return tree

    def expr(self, right_bp):
        left = self.nud(self.advance())
        while self.token.kind == 'op' and BINDING_POWER.get(self.token.text, 0) > right_bp:
            left = self.led(self.advance(), left)
        return left

    def nud(self, token):
        if token.kind == END:
            if self._open:
                raise self.error(self._open[-1], "unbalanced parenthesis")
            raise self.error(token, "unexpected end of input")
        if token.kind == 'number':
            return Const(Fraction(token.text))
        if token.kind == 'name':
            if self.token.text == '(':
                return self.call(token)
            if token.text in FUNCTIONS or token.text in OPERATORS:
                raise self.error(token, "{} must be called with arguments".format(token.text))
            return Symbol(token.text)
        if token.text == '-':
            return Product((MINUS_ONE, self.expr(UNARY_POWER)))
        if token.text == '+':
            return self.expr(UNARY_POWER)
        if token.text == '(':
            self._open.append(token)
            inner = self.expr(0)
            self.close()
            return inner
        if token.text == ')':
            raise self.error(token, "unbalanced parenthesis")
        raise self.error(token, "unexpected token")

    def close(self):
        if self.token.text != ')':
            if self.token.kind == END:
                raise self.error(self._open[-1], "unbalanced parenthesis")
            raise self.error(self.token, "expected ')'")
        self.advance()
        self._open.pop()

    def led(self, token, left):
        op = token.text
        if op == '+':
            return Sum((left, self.expr(10)))
        if op == '-':
            return Sum((left, Product((MINUS_ONE, self.expr(10)))))
        if op == '*':
            return Product((left, self.expr(20)))
        if op == '/':
            return Product((left, IntPow(self.expr(20), -1)))
        exponent = simplify(self.expr(29))
        if not isinstance(exponent, Const) or exponent.value.denominator != 1:
            raise self.error(token, "exponent must be an integer")
        return IntPow(left, int(exponent.value))

    def arguments(self):
        opening = self.advance()
        self._open.append(opening)
        args = []
        if self.token.text == ')':
            self.close()
            return args
        args.append(self.expr(0))
        while self.token.text == ',':
            self.advance()
            args.append(self.expr(0))
        self.close()
        return args

    def call(self, token):
        name = token.text
        if name not in FUNCTIONS and name not in OPERATORS:
            raise self.error(token, "unknown function")
        args = self.arguments()
        if name == 'shift':
            if len(args) != 2:
                raise self.error(token, "shift takes 2 arguments, got {}".format(len(args)))
            offset = simplify(args[1])
            if not isinstance(offset, Const) or offset.value.denominator != 1:
                raise self.error(token, "shift offset must be an integer")
            return Shift(args[0], int(offset.value))
        if len(args) != 1:
            raise self.error(token, "{} takes 1 argument, got {}".format(name, len(args)))
        if name in FUNCTIONS:
            return FUNCTIONS[name](args[0])
        return OPERATORS[name](args[0])


def parse_expression(text, line=1, column=1):
    """
    Parse ``text`` into a canonical Expr.

    Parameters
    ----------
    text : str
    line, column : int
        Position of ``text`` in its source, used in SourceError locations.

    Raises
    ------
    SourceError
        On syntax errors, unknown functions or wrong arity.
    """
    return simplify(Parser(text, line, column).parse())
