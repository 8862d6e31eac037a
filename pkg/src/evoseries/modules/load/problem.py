import hashlib
import os
import re
from dataclasses import dataclass, field

from evoseries.modules.expr.calculus import substitute_all
from evoseries.modules.expr.nodes import Dx, Dxx, Operator, Shift
from evoseries.modules.load.parser import parse_expression
from evoseries.modules.utils.errors import SourceError, ValidationError
from evoseries.modules.utils.util import log

PDE = 'PDE'
DDE = 'DDE'
KINDS = (PDE, DDE)
TIME = 't'
DEFAULT_SPACE = {PDE: 'x', DDE: 'n'}

_SECTION_RE = re.compile(r'^\[\s*([A-Za-z0-9_.]+)\s*\]$')
_NAME_RE = re.compile(r'^[A-Za-z][A-Za-z0-9_]*$')
_EQUATION_RE = re.compile(r'^dt\s*\(\s*([A-Za-z][A-Za-z0-9_]*)\s*\)$')


@dataclass
class Claim:
    name: str
    solutions: dict
    params: tuple = ()
    lets: dict = field(default_factory=dict)


@dataclass
class ProblemSpec:
    """
    A validated evolution system.

    ``equations`` maps each field to the right-hand side of dt(field) = RHS;
    ``initial`` maps each field to its profile at t = 0.
    """
    kind: str
    space: str
    fields: tuple
    parameters: tuple
    equations: dict
    initial: dict
    claims: dict = field(default_factory=dict)
    name: str = ''
    source_hash: str = ''

    def claim(self, name):
        if name not in self.claims:
            raise ValidationError("unknown claim: {} (available: {})".format(name, ", ".join(self.claims) or "none"))
        return self.claims[name]

    def claim_parameters(self, claim=None):
        if claim is None:
            return tuple(self.parameters)
        return tuple(self.parameters) + tuple(claim.params)

    @property
    def is_lattice(self):
        return self.kind == DDE


class _Line:
    __slots__ = ('number', 'key', 'value', 'value_column', 'raw')

    def __init__(self, number, raw, key, value, value_column):
        self.number = number
        self.raw = raw
        self.key = key
        self.value = value
        self.value_column = value_column


def _strip_comment(raw):
    index = raw.find('#')
    return raw if index < 0 else raw[:index]


def _split_assignment(number, raw):
    text = _strip_comment(raw)
    if '=' not in text:
        column = len(text) - len(text.lstrip()) + 1
        raise SourceError(number, column, "expected 'NAME = VALUE'", text.strip())
    index = text.index('=')
    key = text[:index].strip()
    value = text[index + 1:]
    value_column = index + 2 + len(value) - len(value.lstrip())
    return _Line(number, raw, key, value.strip(), value_column)


def _names(line):
    names = [n.strip() for n in line.value.split(',') if n.strip()]
    for n in names:
        if not _NAME_RE.match(n):
            raise SourceError(line.number, line.value_column, "invalid name", n)
    return tuple(names)


def _expression(line):
    return parse_expression(line.value, line.number, line.value_column)


def _read_sections(text):
    sections = []
    current = None
    for number, raw in enumerate(text.splitlines(), 1):
        stripped = _strip_comment(raw).strip()
        if not stripped:
            continue
        m = _SECTION_RE.match(stripped)
        if m:
            current = (m.group(1), number, [])
            sections.append(current)
            continue
        if stripped.startswith('['):
            raise SourceError(number, raw.index('[') + 1, "malformed section header", stripped)
        if current is None:
            raise SourceError(number, raw.index(stripped[0]) + 1, "content before the first section", stripped)
        current[2].append((number, raw))
    return sections


def parse_problem(text):
    """
    Parse and validate a problem file.

    Parameters
    ----------
    text : str
        Contents in the sectioned format ([problem], [equations], [initial],
        [claim.NAME]).

    Returns
    -------
    ProblemSpec

    Raises
    ------
    SourceError
        On malformed lines or expressions.
    ValidationError
        When the system violates a structural rule (missing initial
        condition, shift in a PDE, ...).
    """
    header = dict()
    equations, initial, claims = dict(), dict(), dict()
    seen_sections = set()
    for name, number, lines in _read_sections(text):
        if name in seen_sections:
            raise SourceError(number, 1, "duplicate section", name)
        seen_sections.add(name)
        if name == 'problem':
            for number_, raw in lines:
                line = _split_assignment(number_, raw)
                if line.key not in ('kind', 'space', 'fields', 'parameters', 'name'):
                    raise SourceError(number_, 1, "unknown key in [problem]", line.key)
                header[line.key] = line
        elif name == 'equations':
            for number_, raw in lines:
                line = _split_assignment(number_, raw)
                m = _EQUATION_RE.match(line.key)
                if m is None:
                    raise SourceError(number_, 1, "equations must read dt(FIELD) = EXPR", line.key)
                if m.group(1) in equations:
                    raise ValidationError("duplicate equation: {}".format(m.group(1)))
                equations[m.group(1)] = _expression(line)
        elif name == 'initial':
            for number_, raw in lines:
                line = _split_assignment(number_, raw)
                if not _NAME_RE.match(line.key):
                    raise SourceError(number_, 1, "invalid field name", line.key)
                if line.key in initial:
                    raise ValidationError("duplicate initial condition: {}".format(line.key))
                initial[line.key] = _expression(line)
        elif name.startswith('claim.') and _NAME_RE.match(name[len('claim.'):]):
            claim_name = name[len('claim.'):]
            claims[claim_name] = _read_claim(claim_name, lines)
        else:
            raise SourceError(number, 1, "unknown section", name)

    spec = _build_spec(header, equations, initial, claims)
    validate_problem(spec)
    return spec


def _read_claim(name, lines):
    lets = dict()
    solutions = dict()
    params = ()
    for number, raw in lines:
        line = _split_assignment(number, raw)
        key = line.key
        if key.startswith('let ') or key.startswith('let\t'):
            let_name = key[3:].strip()
            if not _NAME_RE.match(let_name):
                raise SourceError(number, 1, "invalid let name", let_name)
            lets[let_name] = substitute_all(_expression(line), lets)
        elif key == 'params':
            params = _names(line)
        elif _NAME_RE.match(key):
            if key in solutions:
                raise ValidationError("claim {} defines {} twice".format(name, key))
            solutions[key] = substitute_all(_expression(line), lets)
        else:
            raise SourceError(number, 1, "invalid claim line", key)
    return Claim(name=name, solutions=solutions, params=params, lets=lets)


def _build_spec(header, equations, initial, claims):
    for key in ('kind', 'fields'):
        if key not in header:
            raise ValidationError("missing '{}' in [problem]".format(key))
    kind = header['kind'].value.upper()
    if kind not in KINDS:
        raise ValidationError("kind must be PDE or DDE, got {}".format(header['kind'].value))
    space = header['space'].value if 'space' in header else DEFAULT_SPACE[kind]
    if not _NAME_RE.match(space):
        line = header['space']
        raise SourceError(line.number, line.value_column, "invalid name", space)
    fields = _names(header['fields'])
    parameters = _names(header['parameters']) if 'parameters' in header else ()
    name = header['name'].value if 'name' in header else ''
    ordered_equations = {f: equations[f] for f in fields if f in equations}
    ordered_equations.update({f: e for f, e in equations.items() if f not in ordered_equations})
    ordered_initial = {f: initial[f] for f in fields if f in initial}
    ordered_initial.update({f: e for f, e in initial.items() if f not in ordered_initial})
    return ProblemSpec(kind=kind, space=space, fields=fields, parameters=parameters,
                       equations=ordered_equations, initial=ordered_initial, claims=claims, name=name)


def _operators(e):
    found = set()
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Operator):
            found.add(type(node))
        stack.extend(node.children)
    return found


def validate_problem(spec):
    """Check the structural rules of a ProblemSpec; raise ValidationError naming the first violation."""
    names = list(spec.fields) + list(spec.parameters) + [spec.space]
    if not spec.fields:
        raise ValidationError("no fields declared")
    for n in names:
        if n == TIME:
            raise ValidationError("t is reserved for time and cannot be declared")
        if names.count(n) > 1:
            raise ValidationError("name declared twice: {}".format(n))
    for f in spec.equations:
        if f not in spec.fields:
            raise ValidationError("equation for undeclared field: {}".format(f))
    for f in spec.initial:
        if f not in spec.fields:
            raise ValidationError("initial condition for undeclared field: {}".format(f))
    allowed_rhs = set(spec.fields) | set(spec.parameters) | {spec.space}
    allowed_ic = set(spec.parameters) | {spec.space}
    for f in spec.fields:
        if f not in spec.equations:
            raise ValidationError("missing equation: {}".format(f))
        if f not in spec.initial:
            raise ValidationError("missing initial condition: {}".format(f))
        rhs = spec.equations[f]
        symbols = rhs.free_symbols
        if TIME in symbols:
            raise ValidationError("t must not appear in the right-hand side of dt({})".format(f))
        unknown = sorted(symbols - allowed_rhs)
        if unknown:
            raise ValidationError("unknown symbol {} in equation for {}".format(unknown[0], f))
        operators = _operators(rhs)
        if spec.kind == PDE and Shift in operators:
            raise ValidationError("shift used in a PDE (equation for {})".format(f))
        if spec.kind == DDE and (Dx in operators or Dxx in operators):
            raise ValidationError("dx/dxx used in a DDE (equation for {})".format(f))
        ic = spec.initial[f]
        unknown = sorted(ic.free_symbols - allowed_ic)
        if unknown:
            raise ValidationError("unknown symbol {} in initial condition of {}".format(unknown[0], f))
        if _operators(ic):
            raise ValidationError("operator in initial condition of {}".format(f))
    for claim in spec.claims.values():
        _validate_claim(spec, claim)


def _validate_claim(spec, claim):
    for p in claim.params:
        if p in spec.fields or p in spec.parameters or p in (spec.space, TIME):
            raise ValidationError("claim {} parameter {} clashes with a declared name".format(claim.name, p))
    for f in claim.solutions:
        if f not in spec.fields:
            raise ValidationError("claim {} names undeclared field {}".format(claim.name, f))
    allowed = set(spec.parameters) | set(claim.params) | {spec.space, TIME}
    for f in spec.fields:
        if f not in claim.solutions:
            raise ValidationError("claim {} is missing field {}".format(claim.name, f))
        e = claim.solutions[f]
        unknown = sorted(e.free_symbols - allowed)
        if unknown:
            raise ValidationError("unknown symbol {} in claim {} for {}".format(unknown[0], claim.name, f))
        if _operators(e):
            raise ValidationError("operator in claim {} for {}".format(claim.name, f))
    claim.solutions = {f: claim.solutions[f] for f in spec.fields}


def read_problem_file(path):
    """Read a UTF-8 problem file; the sha256 of its bytes is kept in ``source_hash``."""
    log("read problem file:", path)
    with open(path, 'rb') as file:
        data = file.read()
    try:
        text = data.decode('utf-8')
    except UnicodeDecodeError as err:
        raise ValidationError("{} is not valid UTF-8: {}".format(path, err))
    spec = parse_problem(text)
    spec.source_hash = hashlib.sha256(data).hexdigest()
    if not spec.name:
        spec.name = os.path.splitext(os.path.basename(path))[0]
    log("problem statistics: kind={}, fields={}, parameters={}, claims={}".format(
        spec.kind, len(spec.fields), len(spec.parameters), len(spec.claims)))
    return spec
